//! Multi-element orthonormal polynomial bases on the random domain.
//!
//! Each element carries the Legendre polynomials of its reference variable
//! `s ∈ [-1, 1]`, scaled to be orthonormal with respect to the conditional
//! uniform density. Coefficient blocks are stored degree-major: entry
//! `k * m + c` holds mode `k` of component `c`.

mod quadrature;

pub use quadrature::{quadrature, QuadratureKind, QuadratureRule};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distribution {
    #[default]
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomDomain {
    pub xi_left: f64,
    pub xi_right: f64,
    #[serde(default)]
    pub distribution: Distribution,
}

impl RandomDomain {
    pub fn new(xi_left: f64, xi_right: f64) -> Result<Self> {
        if !(xi_left < xi_right) || !xi_left.is_finite() || !xi_right.is_finite() {
            return Err(Error::Domain(format!("random domain [{xi_left}, {xi_right}]")));
        }
        Ok(Self {
            xi_left,
            xi_right,
            distribution: Distribution::Uniform,
        })
    }

    /// Uniform law on [-1, 1].
    pub fn symmetric_unit() -> Self {
        Self {
            xi_left: -1.0,
            xi_right: 1.0,
            distribution: Distribution::Uniform,
        }
    }

    pub fn width(&self) -> f64 {
        self.xi_right - self.xi_left
    }
}

/// Orthonormal Legendre function of degree `k` at reference point `s`.
pub fn orthonormal_legendre(k: usize, s: f64) -> f64 {
    let (p, _) = quadrature::legendre_with_derivative(k, s);
    ((2 * k + 1) as f64).sqrt() * p
}

/// Number of element quadrature nodes for basis degree `degree`.
///
/// Lobatto with `degree + 2` nodes integrates degree `2 * degree + 1`
/// exactly, which covers every product of two basis functions.
pub fn element_node_count(degree: usize) -> usize {
    (degree + 2).max(3)
}

#[derive(Debug, Clone)]
pub struct MultiElementBasis {
    domain: RandomDomain,
    n_elements: usize,
    degree: usize,
    element_width: f64,
    /// Element rule on the reference interval [-1, 1].
    reference_rule: QuadratureRule,
    /// `phi_nodes[rho * (degree + 1) + k]`
    phi_nodes: Vec<f64>,
}

impl MultiElementBasis {
    pub fn new(domain: RandomDomain, n_elements: usize, degree: usize) -> Result<Self> {
        let domain = RandomDomain::new(domain.xi_left, domain.xi_right)?;
        if n_elements == 0 {
            return Err(Error::Domain("at least one random element is required".into()));
        }
        let reference_rule =
            quadrature(QuadratureKind::GaussLobatto, element_node_count(degree), -1.0, 1.0)?;
        let phi_nodes = reference_rule
            .nodes
            .iter()
            .flat_map(|&s| (0..=degree).map(move |k| orthonormal_legendre(k, s)))
            .collect();
        Ok(Self {
            domain,
            n_elements,
            degree,
            element_width: domain.width() / n_elements as f64,
            reference_rule,
            phi_nodes,
        })
    }

    pub fn domain(&self) -> RandomDomain {
        self.domain
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_modes(&self) -> usize {
        self.degree + 1
    }

    pub fn element_width(&self) -> f64 {
        self.element_width
    }

    pub fn element_probability(&self, _j: usize) -> f64 {
        1.0 / self.n_elements as f64
    }

    pub fn element_probabilities(&self) -> Vec<f64> {
        (0..self.n_elements).map(|j| self.element_probability(j)).collect()
    }

    /// Interval of element `j`.
    pub fn element(&self, j: usize) -> (f64, f64) {
        let left = self.domain.xi_left + j as f64 * self.element_width;
        let right = if j + 1 == self.n_elements {
            self.domain.xi_right
        } else {
            self.domain.xi_left + (j + 1) as f64 * self.element_width
        };
        (left, right)
    }

    pub fn elements(&self) -> Vec<(f64, f64)> {
        (0..self.n_elements).map(|j| self.element(j)).collect()
    }

    /// Element containing `xi`; the right end belongs to the last element.
    pub fn locate(&self, xi: f64) -> Result<usize> {
        let d = self.domain;
        if !(d.xi_left..=d.xi_right).contains(&xi) {
            return Err(Error::Range {
                value: xi,
                lo: d.xi_left,
                hi: d.xi_right,
            });
        }
        let j = ((xi - d.xi_left) / self.element_width).floor() as usize;
        Ok(j.min(self.n_elements - 1))
    }

    /// Reference coordinate of `xi` in element `j`.
    pub fn to_reference(&self, j: usize, xi: f64) -> f64 {
        let (a, b) = self.element(j);
        (2.0 * xi - a - b) / (b - a)
    }

    pub fn n_nodes(&self) -> usize {
        self.reference_rule.len()
    }

    /// Scaled weights of the element rule (identical on every element).
    pub fn node_weights(&self) -> &[f64] {
        &self.reference_rule.weights
    }

    /// Element rule nodes in reference coordinates.
    pub fn reference_nodes(&self) -> &[f64] {
        &self.reference_rule.nodes
    }

    /// Physical ξ-nodes of element `j`.
    pub fn element_nodes(&self, j: usize) -> Vec<f64> {
        let (a, b) = self.element(j);
        self.reference_rule
            .nodes
            .iter()
            .map(|&s| if s == -1.0 { a } else if s == 1.0 { b } else { a + 0.5 * (b - a) * (s + 1.0) })
            .collect()
    }

    /// Element rule with physical nodes for element `j`.
    pub fn element_rule(&self, j: usize) -> QuadratureRule {
        QuadratureRule {
            kind: self.reference_rule.kind,
            nodes: self.element_nodes(j),
            weights: self.reference_rule.weights.clone(),
        }
    }

    /// Basis values at the element nodes, row `rho` holds `phi_0..phi_K`.
    pub fn phi_at_node(&self, rho: usize) -> &[f64] {
        let n = self.n_modes();
        &self.phi_nodes[rho * n..(rho + 1) * n]
    }

    pub fn eval_basis(&self, j: usize, k: usize, xi: f64) -> Result<f64> {
        if j >= self.n_elements {
            return Err(Error::Shape {
                expected: self.n_elements,
                got: j,
            });
        }
        if k > self.degree {
            return Err(Error::Range {
                value: k as f64,
                lo: 0.0,
                hi: self.degree as f64,
            });
        }
        let (a, b) = self.element(j);
        let slack = 1e-14 * (b - a);
        if xi < a - slack || xi > b + slack {
            return Err(Error::Range { value: xi, lo: a, hi: b });
        }
        Ok(orthonormal_legendre(k, self.to_reference(j, xi).clamp(-1.0, 1.0)))
    }

    /// Projects node samples (`n_nodes * m`, node-major) onto the basis.
    pub fn project(&self, samples: &[f64], m: usize) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.n_modes() * m];
        self.project_into(samples, m, &mut out)?;
        Ok(out)
    }

    pub fn project_into(&self, samples: &[f64], m: usize, out: &mut [f64]) -> Result<()> {
        let expected = self.n_nodes() * m;
        if samples.len() != expected {
            return Err(Error::Shape {
                expected,
                got: samples.len(),
            });
        }
        out.iter_mut().for_each(|v| *v = 0.0);
        for (rho, &w) in self.node_weights().iter().enumerate() {
            let sample = &samples[rho * m..(rho + 1) * m];
            for (k, &phi) in self.phi_at_node(rho).iter().enumerate() {
                for c in 0..m {
                    out[k * m + c] += w * phi * sample[c];
                }
            }
        }
        Ok(())
    }

    /// Evaluates a coefficient block of element `j` at `xi`.
    pub fn evaluate(&self, coeffs: &[f64], m: usize, j: usize, xi: f64) -> Result<Vec<f64>> {
        let (a, b) = self.element(j);
        let slack = 1e-14 * (b - a);
        if xi < a - slack || xi > b + slack {
            return Err(Error::Range { value: xi, lo: a, hi: b });
        }
        let s = self.to_reference(j, xi).clamp(-1.0, 1.0);
        let mut out = vec![0.0; m];
        for k in 0..self.n_modes() {
            let phi = orthonormal_legendre(k, s);
            for c in 0..m {
                out[c] += coeffs[k * m + c] * phi;
            }
        }
        Ok(out)
    }

    /// Evaluates a coefficient block at element node `rho`.
    pub fn evaluate_at_node(&self, coeffs: &[f64], m: usize, rho: usize, out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (k, &phi) in self.phi_at_node(rho).iter().enumerate() {
            for c in 0..m {
                out[c] += coeffs[k * m + c] * phi;
            }
        }
    }

    /// Mean and variance per component from one block per element.
    pub fn moments<'a>(
        &self,
        blocks: impl IntoIterator<Item = &'a [f64]>,
        m: usize,
    ) -> (Vec<f64>, Vec<f64>) {
        let mut mean = vec![0.0; m];
        let mut second = vec![0.0; m];
        for (j, block) in blocks.into_iter().enumerate() {
            let p = self.element_probability(j);
            for c in 0..m {
                mean[c] += p * block[c];
                let sq: f64 = (0..self.n_modes()).map(|k| block[k * m + c].powi(2)).sum();
                second[c] += p * sq;
            }
        }
        let var = mean
            .iter()
            .zip(&second)
            .map(|(e, s)| (s - e * e).max(0.0))
            .collect();
        (mean, var)
    }

    pub fn monomial_transform(&self) -> MonomialTransform {
        MonomialTransform::new(self)
    }
}

/// Change of basis between orthonormal and monomial coefficients in the
/// reference variable `s` of an element.
///
/// `forward[(m, k)] = E[s^m φ_k]`. Orthonormal coefficients are `Vᵀ c` for
/// monomial coefficients `c`. Orthogonality makes `V` lower triangular.
#[derive(Debug, Clone)]
pub struct MonomialTransform {
    pub forward: Matrix,
    pub inverse: Matrix,
}

impl MonomialTransform {
    pub fn new(basis: &MultiElementBasis) -> Self {
        let n = basis.n_modes();
        let mut forward = Matrix::zeros(n, n);
        for mdeg in 0..n {
            for k in 0..=mdeg {
                let mut acc = 0.0;
                for (rho, &w) in basis.node_weights().iter().enumerate() {
                    let s = basis.reference_nodes()[rho];
                    acc += w * s.powi(mdeg as i32) * basis.phi_at_node(rho)[k];
                }
                forward[(mdeg, k)] = acc;
            }
        }
        let inverse = forward
            .lower_triangular_inverse()
            .expect("monomial transform of an orthonormal basis is nonsingular");
        Self { forward, inverse }
    }

    pub fn n_modes(&self) -> usize {
        self.forward.rows()
    }

    /// Monomial coefficients `c = V⁻ᵀ u` of one component.
    pub fn to_monomial(&self, orth: &[f64]) -> Vec<f64> {
        let n = self.n_modes();
        (0..n)
            .map(|mdeg| (mdeg..n).map(|k| self.inverse[(k, mdeg)] * orth[k]).sum())
            .collect()
    }

    /// Orthonormal coefficients `u = Vᵀ c` of one component.
    pub fn from_monomial(&self, mono: &[f64]) -> Vec<f64> {
        let n = self.n_modes();
        (0..n)
            .map(|k| (k..n).map(|mdeg| self.forward[(mdeg, k)] * mono[mdeg]).sum())
            .collect()
    }

    /// Linear monomial coefficient of one component.
    pub fn linear_coefficient(&self, orth: &[f64]) -> f64 {
        let n = self.n_modes();
        if n < 2 {
            return 0.0;
        }
        (1..n).map(|k| self.inverse[(k, 1)] * orth[k]).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn unit(n: usize, k: usize) -> MultiElementBasis {
        MultiElementBasis::new(RandomDomain::symmetric_unit(), n, k).unwrap()
    }

    #[test]
    fn three_elements_split_unit_interval() {
        let b = unit(3, 1);
        let e = b.elements();
        assert_abs_diff_eq!(e[0].0, -1.0);
        assert_abs_diff_eq!(e[0].1, -1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e[1].1, 1.0 / 3.0, epsilon = 1e-15);
        assert_eq!(e[2].1, 1.0);
    }

    #[test]
    fn ten_elements_have_equal_width_and_probability() {
        let b = unit(10, 0);
        assert_abs_diff_eq!(b.element_width(), 0.2, epsilon = 1e-15);
        assert!(b.element_probabilities().iter().all(|&p| (p - 0.1).abs() < 1e-15));
    }

    #[test]
    fn basis_values_on_global_element() {
        let b = unit(1, 2);
        assert_abs_diff_eq!(b.eval_basis(0, 1, 0.5).unwrap(), 3f64.sqrt() * 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(b.eval_basis(0, 0, 0.3).unwrap(), 1.0);
        assert_abs_diff_eq!(b.eval_basis(0, 2, 1.0).unwrap(), 5f64.sqrt(), epsilon = 1e-14);
        assert!(b.eval_basis(0, 1, 1.5).is_err());
        assert!(b.eval_basis(0, 3, 0.0).is_err());
    }

    #[test]
    fn projection_of_three_xi_squared() {
        let b = unit(1, 2);
        let samples: Vec<f64> = b.element_nodes(0).iter().map(|x| 3.0 * x * x).collect();
        let u = b.project(&samples, 1).unwrap();
        assert_abs_diff_eq!(u[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(u[1], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(u[2], 2.0 / 5f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn projection_rejects_wrong_sample_count() {
        let b = unit(1, 2);
        assert!(matches!(b.project(&[1.0, 2.0], 1), Err(Error::Shape { .. })));
    }

    #[test]
    fn evaluate_odd_mode_at_center() {
        let b = unit(1, 2);
        assert_eq!(b.evaluate(&[0.0, 1.0, 0.0], 1, 0, 0.0).unwrap()[0], 0.0);
    }

    #[test]
    fn single_element_moments() {
        let b = unit(1, 2);
        let (e, v) = b.moments([&[2.0, 0.5, 0.0][..]], 1);
        assert_abs_diff_eq!(e[0], 2.0);
        assert_abs_diff_eq!(v[0], 0.25);
    }

    #[test]
    fn two_element_moments_match_piecewise_integral() {
        let b = unit(2, 1);
        let (e, v) = b.moments([&[1.0, 0.0][..], &[3.0, 0.0][..]], 1);
        // brute force over the piecewise constant density
        let dense = quadrature(QuadratureKind::GaussLegendre, 400, -1.0, 1.0).unwrap();
        let f = |x: f64| if x < 0.0 { 1.0 } else { 3.0 };
        let mean = dense.mean(f);
        let var = dense.mean(|x| f(x).powi(2)) - mean * mean;
        assert_abs_diff_eq!(e[0], mean, epsilon = 1e-12);
        assert_abs_diff_eq!(v[0], var, epsilon = 1e-12);
        assert_abs_diff_eq!(e[0], 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v[0], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn linear_transform_on_global_element() {
        let t = unit(1, 1).monomial_transform();
        assert_abs_diff_eq!(t.forward[(0, 0)], 1.0, epsilon = 1e-15);
        assert_eq!(t.forward[(0, 1)], 0.0);
        assert_abs_diff_eq!(t.forward[(1, 0)], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t.forward[(1, 1)], 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        let t0 = unit(1, 0).monomial_transform();
        assert_abs_diff_eq!(t0.forward[(0, 0)], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn transform_round_trip() {
        for k in 0..=5 {
            let t = unit(4, k).monomial_transform();
            let prod = t.forward.matmul(&t.inverse);
            for r in 0..=k {
                for c in 0..=k {
                    let id = if r == c { 1.0 } else { 0.0 };
                    assert_abs_diff_eq!(prod[(r, c)], id, epsilon = 1e-10);
                }
            }
            let mono: Vec<f64> = (0..=k).map(|i| 0.5 - i as f64).collect();
            let back = t.to_monomial(&t.from_monomial(&mono));
            for (a, b) in mono.iter().zip(&back) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-12);
            }
        }
    }
}
