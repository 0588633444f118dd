use crate::basis::{quadrature, QuadratureKind, QuadratureRule};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Lobatto nodes per cell for x-integrals.
pub const X_NODES: usize = 4;

/// Uniform partition of `[x_left, x_right]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mesh {
    pub x_left: f64,
    pub x_right: f64,
    pub n_cells: usize,
}

impl Mesh {
    pub fn new(x_left: f64, x_right: f64, n_cells: usize) -> Result<Self> {
        if !(x_left < x_right) || !x_left.is_finite() || !x_right.is_finite() {
            return Err(Error::Domain(format!("mesh interval [{x_left}, {x_right}]")));
        }
        if n_cells < 3 {
            return Err(Error::Domain(format!("mesh needs at least 3 cells, got {n_cells}")));
        }
        Ok(Self {
            x_left,
            x_right,
            n_cells,
        })
    }

    pub fn dx(&self) -> f64 {
        (self.x_right - self.x_left) / self.n_cells as f64
    }

    /// Cell center; negative or overflowing indices address ghost cells.
    pub fn center(&self, i: isize) -> f64 {
        self.x_left + (i as f64 + 0.5) * self.dx()
    }

    pub fn interface(&self, f: usize) -> f64 {
        self.x_left + f as f64 * self.dx()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells as isize).map(|i| self.center(i)).collect()
    }

    /// Lobatto rule on the reference cell `[-1/2, 1/2]`.
    pub fn cell_rule(&self) -> QuadratureRule {
        quadrature(QuadratureKind::GaussLobatto, X_NODES, -0.5, 0.5).expect("fixed node count")
    }

    /// Lobatto nodes of cell `i` (ghost indices allowed).
    pub fn cell_nodes(&self, i: isize) -> Vec<f64> {
        let c = self.center(i);
        let dx = self.dx();
        self.cell_rule().nodes.iter().map(|z| c + z * dx).collect()
    }

    /// Mesh with `factor` times as many cells on the same interval.
    pub fn refined(&self, factor: usize) -> Mesh {
        Mesh {
            n_cells: self.n_cells * factor,
            ..*self
        }
    }
}
