//! Central WENO-Z reconstructions of degree two from cell means.
//!
//! Polynomials are stored in local shifted monomials: `ζ = (x - x_i)/Δx`
//! and, in two dimensions, `η = (ξ - ξ_j)/Δξ`, both in `[-1/2, 1/2]`.
//!
//! The regularization in the nonlinear weights is `ε = Δx² S²`, where `S`
//! is the largest absolute mean in the stencil, so scaling the data scales
//! the reconstruction by the same factor. Indicators are evaluated on the
//! data divided by `S`.

mod one_d;
mod two_d;

pub use one_d::{cwenoz_1d, optimal_parabola, Poly1D};
pub use two_d::{cwenoz_2d, Poly2D, Stencil2D};

use crate::error::{Error, Result};

/// Linear weight of the central candidate.
pub const CENTRAL_WEIGHT: f64 = 0.5;
/// Linear weight of each one-sided candidate in one dimension.
pub const SIDE_WEIGHT: f64 = 0.25;
/// Linear weight of each corner candidate in two dimensions.
pub const CORNER_WEIGHT: f64 = 0.125;

/// Ghost cells needed on each side by a reconstruction of `degree`.
pub fn ghost_width(degree: usize) -> usize {
    if degree == 0 {
        1
    } else {
        2
    }
}

/// Ghost-cell rule for one row of cell means.
#[derive(Debug, Clone, PartialEq)]
pub enum RowBoundary {
    Periodic,
    Extrapolate,
    /// Explicit ghost means, ordered outward-in: `left[0]` is adjacent to
    /// the first cell, `right[0]` to the last one.
    Ghosts { left: Vec<f64>, right: Vec<f64> },
}

/// Traces of a reconstructed row at all `n + 1` interfaces.
#[derive(Debug, Clone, PartialEq)]
pub struct RowReconstruction {
    pub polys: Vec<Poly1D>,
    /// `minus[f]`: value from the left cell at interface `f`.
    pub minus: Vec<f64>,
    /// `plus[f]`: value from the right cell at interface `f`.
    pub plus: Vec<f64>,
}

/// Fills ghosts around `means` and returns the extended row.
pub fn extend_row(means: &[f64], g: usize, boundary: &RowBoundary) -> Result<Vec<f64>> {
    let n = means.len();
    let mut ext = Vec::with_capacity(n + 2 * g);
    for s in (0..g).rev() {
        ext.push(match boundary {
            RowBoundary::Periodic => means[(n - 1 - s % n) % n],
            RowBoundary::Extrapolate => means[0],
            RowBoundary::Ghosts { left, .. } => *left.get(s).ok_or(Error::Shape {
                expected: g,
                got: left.len(),
            })?,
        });
    }
    ext.extend_from_slice(means);
    for s in 0..g {
        ext.push(match boundary {
            RowBoundary::Periodic => means[s % n],
            RowBoundary::Extrapolate => means[n - 1],
            RowBoundary::Ghosts { right, .. } => *right.get(s).ok_or(Error::Shape {
                expected: g,
                got: right.len(),
            })?,
        });
    }
    Ok(ext)
}

/// Reconstructs a row of `n ≥ 3` cell means on cells of width `dx`.
pub fn reconstruct_row(
    means: &[f64],
    dx: f64,
    degree: usize,
    boundary: &RowBoundary,
) -> Result<RowReconstruction> {
    if means.len() < 3 {
        return Err(Error::Shape {
            expected: 3,
            got: means.len(),
        });
    }
    if degree != 0 && degree != 2 {
        return Err(Error::Config(format!("reconstruction degree {degree} (expected 0 or 2)")));
    }
    let n = means.len();
    let g = ghost_width(degree);
    let ext = extend_row(means, g, boundary)?;
    let polys: Vec<Poly1D> = (0..n + 2)
        .map(|c| {
            let e = c + g - 1;
            if degree == 0 {
                Poly1D::constant(ext[e])
            } else {
                cwenoz_1d([ext[e - 1], ext[e], ext[e + 1]], dx)
            }
        })
        .collect();
    // polys[c] belongs to cell c - 1
    let minus = (0..=n).map(|f| polys[f].eval_local(0.5)).collect();
    let plus = (0..=n).map(|f| polys[f + 1].eval_local(-0.5)).collect();
    Ok(RowReconstruction {
        polys: polys[1..=n].to_vec(),
        minus,
        plus,
    })
}

/// Interface traces of an already extended row without allocation.
///
/// `ext` holds `n + 2g` means; `minus` and `plus` receive `n + 1` values.
pub fn row_traces(ext: &[f64], g: usize, dx: f64, degree: usize, minus: &mut [f64], plus: &mut [f64]) {
    let n = ext.len() - 2 * g;
    let poly = |cell: usize| -> Poly1D {
        let e = cell + g - 1;
        if degree == 0 {
            Poly1D::constant(ext[e])
        } else {
            cwenoz_1d([ext[e - 1], ext[e], ext[e + 1]], dx)
        }
    };
    let mut left = poly(0);
    for f in 0..=n {
        let right = poly(f + 1);
        minus[f] = left.eval_local(0.5);
        plus[f] = right.eval_local(-0.5);
        left = right;
    }
}

/// Nonlinear Z-weights from linear weights and smoothness indicators.
pub(crate) fn z_weights<const N: usize>(linear: [f64; N], beta: [f64; N], tau: f64, eps: f64) -> [f64; N] {
    let mut alpha = [0.0; N];
    for i in 0..N {
        alpha[i] = linear[i] * (1.0 + tau / (beta[i] + eps));
    }
    let total: f64 = alpha.iter().sum();
    alpha.map(|a| a / total)
}
