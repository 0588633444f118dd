//! Closed-form solutions used as references.

use crate::basis::{orthonormal_legendre, quadrature, QuadratureKind};
use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen, Matrix, SymmetricEigen};
use std::f64::consts::PI;

use super::Advection;

/// Galerkin matrix `A[l][k] = E[a(ξ) φ_l φ_k]` of uncertain advection on the
/// global basis of degree `degree`.
pub fn advection_sg_matrix(degree: usize) -> Matrix {
    let n = degree + 1;
    let q = quadrature(QuadratureKind::GaussLegendre, n, -1.0, 1.0)
        .expect("positive node count on the unit interval");
    let mut a = Matrix::zeros(n, n);
    for l in 0..n {
        for k in l..n {
            let v = q.mean(|xi| Advection::speed(xi) * orthonormal_legendre(l, xi) * orthonormal_legendre(k, xi));
            a[(l, k)] = v;
            a[(k, l)] = v;
        }
    }
    a
}

/// Location of the right end of the initial plateau `u = 1` on `[0, 0.5]`.
pub const ADVECTION_PLATEAU_END: f64 = 0.5;

/// Exact Galerkin solution of uncertain advection for the plateau initial
/// data and inflow value one, by characteristics of the diagonalized system.
#[derive(Debug, Clone)]
pub struct AdvectionSgSolution {
    eigen: SymmetricEigen,
}

impl AdvectionSgSolution {
    pub fn new(degree: usize) -> Result<Self> {
        Ok(Self {
            eigen: symmetric_eigen(&advection_sg_matrix(degree))?,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigen.values
    }

    /// Characteristic variables carry `T[0][j]` behind their front.
    fn front(&self, j: usize) -> f64 {
        self.eigen.vectors[(0, j)]
    }

    pub fn coefficients(&self, t: f64, x: f64) -> Vec<f64> {
        let n = self.eigen.values.len();
        let mut u = vec![0.0; n];
        for (j, &lambda) in self.eigen.values.iter().enumerate() {
            if x - lambda * t <= ADVECTION_PLATEAU_END {
                let w = self.front(j);
                for (k, uk) in u.iter_mut().enumerate() {
                    *uk += self.eigen.vectors[(k, j)] * w;
                }
            }
        }
        u
    }

    /// Exact average of the coefficients over `[a, b]`.
    pub fn cell_average(&self, t: f64, a: f64, b: f64) -> Vec<f64> {
        let n = self.eigen.values.len();
        let mut u = vec![0.0; n];
        for (j, &lambda) in self.eigen.values.iter().enumerate() {
            let front = ADVECTION_PLATEAU_END + lambda * t;
            let fraction = ((front - a) / (b - a)).clamp(0.0, 1.0);
            let w = self.front(j) * fraction;
            for (k, uk) in u.iter_mut().enumerate() {
                *uk += self.eigen.vectors[(k, j)] * w;
            }
        }
        u
    }
}

/// Convenience wrapper around [`AdvectionSgSolution::coefficients`].
pub fn advection_analytic_sg(t: f64, x: f64, degree: usize) -> Result<Vec<f64>> {
    Ok(AdvectionSgSolution::new(degree)?.coefficients(t, x))
}

/// Exact random solution of the plateau advection problem.
pub fn advection_exact_sample(t: f64, x: f64, xi: f64) -> f64 {
    if x - Advection::speed(xi) * t <= ADVECTION_PLATEAU_END {
        1.0
    } else {
        0.0
    }
}

/// ξ-location of the discontinuity: `(2x - 1)/t - 3`.
pub fn advection_jump_location(t: f64, x: f64) -> f64 {
    (2.0 * x - 1.0) / t - 3.0
}

/// Stochastic modes of the exact Burgers solution
/// `u = x/(t-1) + c1/(2t-2) φ1 + c2/(2t-2) φ2`.
pub fn burgers_exact_modes(t: f64, x: f64, c1: f64, c2: f64) -> Result<[f64; 3]> {
    if t >= 1.0 {
        return Err(Error::Singularity(format!("Burgers exact solution at t = {t} (needs t < 1)")));
    }
    let d = 2.0 * t - 2.0;
    Ok([x / (t - 1.0), c1 / d, c2 / d])
}

/// Manufactured smooth Euler state `(ρ, m, E)`.
pub fn euler_manufactured(t: f64, x: f64, xi: f64) -> [f64; 3] {
    let theta = PI * (x - xi * t);
    let rho = 1.0 + 0.1 * theta.cos();
    let m = rho * (1.0 + 0.1 * theta.sin());
    [rho, m, rho * rho]
}

/// `∂t u + ∂x f(u)` of the manufactured state, differentiated by hand.
pub fn euler_manufactured_source(t: f64, x: f64, xi: f64, gamma: f64) -> [f64; 3] {
    let theta = PI * (x - xi * t);
    let (s, c) = theta.sin_cos();
    let rho = 1.0 + 0.1 * c;
    let v = 1.0 + 0.1 * s;
    let rho_th = -0.1 * s;
    let v_th = 0.1 * c;
    let energy = rho * rho;
    let energy_th = 2.0 * rho * rho_th;
    let p = (gamma - 1.0) * (energy - 0.5 * rho * v * v);
    let p_th = (gamma - 1.0) * (energy_th - 0.5 * rho_th * v * v - rho * v * v_th);
    let mom_th = rho_th * v + rho * v_th;
    let mom_flux_th = rho_th * v * v + 2.0 * rho * v * v_th + p_th;
    let energy_flux_th = (energy_th + p_th) * v + (energy + p) * v_th;
    // ∂t θ = -π ξ, ∂x θ = π
    [
        PI * (mom_th - xi * rho_th),
        PI * (mom_flux_th - xi * mom_th),
        PI * (energy_flux_th - xi * energy_th),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn quadratic_sg_matrix_closed_form() {
        let a = advection_sg_matrix(2);
        let expected = [
            [1.5, 3f64.sqrt() / 6.0, 0.0],
            [3f64.sqrt() / 6.0, 1.5, 15f64.sqrt() / 15.0],
            [0.0, 15f64.sqrt() / 15.0, 1.5],
        ];
        for r in 0..3 {
            for c in 0..3 {
                assert_abs_diff_eq!(a[(r, c)], expected[r][c], epsilon = 1e-15);
            }
        }
        assert!(a.is_symmetric());
        assert_abs_diff_eq!(advection_sg_matrix(0)[(0, 0)], 1.5, epsilon = 1e-15);
    }

    #[test]
    fn quadratic_sg_eigenvalues() {
        let sol = AdvectionSgSolution::new(2).unwrap();
        let r = 15f64.sqrt() / 10.0;
        let ev = sol.eigenvalues();
        assert_abs_diff_eq!(ev[0], 1.5 - r, epsilon = 1e-12);
        assert_abs_diff_eq!(ev[1], 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(ev[2], 1.5 + r, epsilon = 1e-12);
    }

    #[test]
    fn analytic_sg_initial_and_far_field() {
        let sol = AdvectionSgSolution::new(3).unwrap();
        let u = sol.coefficients(0.0, 0.3);
        assert_abs_diff_eq!(u[0], 1.0, epsilon = 1e-14);
        for v in &u[1..] {
            assert_abs_diff_eq!(*v, 0.0, epsilon = 1e-14);
        }
        assert!(sol.coefficients(0.0, 0.7).iter().all(|&v| v.abs() < 1e-14));
        assert!(sol.coefficients(0.5, 5.0).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn jump_locus() {
        assert_abs_diff_eq!(advection_jump_location(0.5, 1.25), 0.0);
        assert_eq!(advection_exact_sample(0.5, 0.95, 0.0), 1.0);
        assert_eq!(advection_exact_sample(0.5, 1.55, 0.0), 0.0);
    }

    #[test]
    fn burgers_modes() {
        let m = burgers_exact_modes(0.0, 0.5, 1.0, 1.0).unwrap();
        assert_eq!(m, [-0.5, -0.5, -0.5]);
        assert_eq!(burgers_exact_modes(0.2, 0.0, 1.0, 1.0).unwrap()[0], 0.0);
        assert!(matches!(burgers_exact_modes(1.0, 0.0, 1.0, 1.0), Err(Error::Singularity(_))));
    }

    #[test]
    fn manufactured_state_at_origin() {
        let u = euler_manufactured(0.0, 0.0, 0.4);
        assert_abs_diff_eq!(u[0], 1.1, epsilon = 1e-15);
        assert_abs_diff_eq!(u[1], 1.1, epsilon = 1e-15);
        assert_abs_diff_eq!(u[2], 1.21, epsilon = 1e-15);
    }
}
