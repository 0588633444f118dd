use crate::error::{Error, Result};

/// Stochastic Galerkin coefficients of spatial cell means.
///
/// Entry `(k, i, j, c)` is mode `k` of component `c` in cell `i` and random
/// element `j`. The coefficients of one (cell, element) pair are contiguous
/// in the degree-major block layout used by the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct GpcField {
    n_modes: usize,
    n_cells: usize,
    n_elements: usize,
    n_components: usize,
    data: Vec<f64>,
}

impl GpcField {
    pub fn zeros(n_modes: usize, n_cells: usize, n_elements: usize, n_components: usize) -> Self {
        Self {
            n_modes,
            n_cells,
            n_elements,
            n_components,
            data: vec![0.0; n_modes * n_cells * n_elements * n_components],
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    pub fn block_len(&self) -> usize {
        self.n_modes * self.n_components
    }

    fn block_start(&self, i: usize, j: usize) -> usize {
        (j * self.n_cells + i) * self.block_len()
    }

    pub fn block(&self, i: usize, j: usize) -> &[f64] {
        let s = self.block_start(i, j);
        &self.data[s..s + self.block_len()]
    }

    pub fn block_mut(&mut self, i: usize, j: usize) -> &mut [f64] {
        let s = self.block_start(i, j);
        let len = self.block_len();
        &mut self.data[s..s + len]
    }

    pub fn coeff(&self, k: usize, i: usize, j: usize, c: usize) -> f64 {
        self.block(i, j)[k * self.n_components + c]
    }

    pub fn set_coeff(&mut self, k: usize, i: usize, j: usize, c: usize, v: f64) {
        let m = self.n_components;
        self.block_mut(i, j)[k * m + c] = v;
    }

    /// All coefficients of element `j`, cell-major.
    pub fn element_slab(&self, j: usize) -> &[f64] {
        let len = self.n_cells * self.block_len();
        &self.data[j * len..(j + 1) * len]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Means over x-ξ cells, entry `(i, j, c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellMeanField {
    n_cells: usize,
    n_elements: usize,
    n_components: usize,
    data: Vec<f64>,
}

impl CellMeanField {
    pub fn zeros(n_cells: usize, n_elements: usize, n_components: usize) -> Self {
        Self {
            n_cells,
            n_elements,
            n_components,
            data: vec![0.0; n_cells * n_elements * n_components],
        }
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    pub fn state(&self, i: usize, j: usize) -> &[f64] {
        let m = self.n_components;
        let s = (j * self.n_cells + i) * m;
        &self.data[s..s + m]
    }

    pub fn state_mut(&mut self, i: usize, j: usize) -> &mut [f64] {
        let m = self.n_components;
        let s = (j * self.n_cells + i) * m;
        &mut self.data[s..s + m]
    }

    pub fn get(&self, i: usize, j: usize, c: usize) -> f64 {
        self.state(i, j)[c]
    }

    pub fn element_slab(&self, j: usize) -> &[f64] {
        let len = self.n_cells * self.n_components;
        &self.data[j * len..(j + 1) * len]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// State advanced by the time stepper.
#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Gpc(GpcField),
    Means(CellMeanField),
}

impl Solution {
    pub fn data(&self) -> &[f64] {
        match self {
            Solution::Gpc(f) => f.data(),
            Solution::Means(f) => f.data(),
        }
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        match self {
            Solution::Gpc(f) => f.data_mut(),
            Solution::Means(f) => f.data_mut(),
        }
    }

    pub fn as_gpc(&self) -> Option<&GpcField> {
        match self {
            Solution::Gpc(f) => Some(f),
            Solution::Means(_) => None,
        }
    }

    pub fn as_means(&self) -> Option<&CellMeanField> {
        match self {
            Solution::Means(f) => Some(f),
            Solution::Gpc(_) => None,
        }
    }

    /// `self = a·self + b·(other + dt·rate)`, the convex stage update.
    pub(crate) fn stage_update(&mut self, a: f64, b: f64, other: &Solution, dt: f64, rate: &Solution) -> Result<()> {
        let (x, y, r) = (self.data_mut(), other.data(), rate.data());
        if x.len() != y.len() || x.len() != r.len() {
            return Err(Error::Shape {
                expected: x.len(),
                got: y.len().min(r.len()),
            });
        }
        for ((xv, yv), rv) in x.iter_mut().zip(y).zip(r) {
            *xv = a * *xv + b * (yv + dt * rv);
        }
        Ok(())
    }
}
