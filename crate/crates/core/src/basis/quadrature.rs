//! Gauss-Legendre and Gauss-Lobatto rules with weights normalized to one.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureKind {
    GaussLegendre,
    GaussLobatto,
}

/// Nodes and weights on an interval. Weights sum to one, so a rule computes
/// the mean of a function over its interval.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub kind: QuadratureKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Highest polynomial degree integrated exactly.
    pub fn exactness(&self) -> usize {
        let n = self.nodes.len();
        match self.kind {
            QuadratureKind::GaussLegendre => 2 * n - 1,
            QuadratureKind::GaussLobatto => 2 * n - 3,
        }
    }

    /// Weighted mean of `f` over the interval.
    pub fn mean(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Legendre polynomial and its derivative at `x`.
pub(crate) fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut prev, mut cur) = (1.0, x);
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    let nf = n as f64;
    let deriv = if (x * x - 1.0).abs() < 1e-300 {
        // endpoint limit P_n'(±1) = ±n(n+1)/2
        x.signum().powi(n as i32 + 1) * nf * (nf + 1.0) / 2.0
    } else {
        nf * (x * cur - prev) / (x * x - 1.0)
    };
    (cur, deriv)
}

/// Reference rule on [-1, 1] with raw weights summing to 2.
fn reference_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Reference Lobatto rule on [-1, 1]: endpoints plus the roots of P'_{n-1}.
fn reference_lobatto(n: usize) -> (Vec<f64>, Vec<f64>) {
    let deg = n - 1;
    let degf = deg as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * i as f64 / degf).cos();
        if i > 0 {
            // Newton on (1 - x^2) P'_{deg}(x), written via P_deg and P_{deg-1}
            for _ in 0..100 {
                let (p, _) = legendre_with_derivative(deg, x);
                let (pm, _) = legendre_with_derivative(deg - 1, x);
                let dx = (x * p - pm) / (n as f64 * p);
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
        }
        let (p, _) = legendre_with_derivative(deg, x);
        let w = 2.0 / (degf * (degf + 1.0) * p * p);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Builds a rule with `n` nodes on `[a, b]`, weights scaled to sum to one.
pub fn quadrature(kind: QuadratureKind, n: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("quadrature interval [{a}, {b}]")));
    }
    let (ref_nodes, ref_weights) = match kind {
        QuadratureKind::GaussLegendre if n >= 1 => reference_legendre(n),
        QuadratureKind::GaussLobatto if n >= 2 => reference_lobatto(n),
        _ => {
            return Err(Error::Domain(format!("{n} nodes for {kind:?}")));
        }
    };
    let total: f64 = ref_weights.iter().sum();
    let half = 0.5 * (b - a);
    let nodes = ref_nodes
        .iter()
        .map(|&s| if s == -1.0 { a } else if s == 1.0 { b } else { a + half * (s + 1.0) })
        .collect();
    let weights = ref_weights.iter().map(|w| w / total).collect();
    Ok(QuadratureRule {
        kind,
        nodes,
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn three_point_legendre_nodes() {
        let q = quadrature(QuadratureKind::GaussLegendre, 3, -1.0, 1.0).unwrap();
        let r = (0.6f64).sqrt();
        assert_abs_diff_eq!(q.nodes[0], -r, epsilon = 1e-15);
        assert_abs_diff_eq!(q.nodes[1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.nodes[2], r, epsilon = 1e-15);
        assert_abs_diff_eq!(q.weights[1], 4.0 / 9.0, epsilon = 1e-15);
    }

    #[test]
    fn two_point_lobatto_is_trapezoid() {
        let q = quadrature(QuadratureKind::GaussLobatto, 2, 0.3, 2.0).unwrap();
        assert_eq!(q.nodes, vec![0.3, 2.0]);
        assert_abs_diff_eq!(q.weights[0], 0.5, epsilon = 1e-16);
        assert_abs_diff_eq!(q.weights[1], 0.5, epsilon = 1e-16);
    }

    #[test]
    fn single_legendre_node_is_midpoint() {
        let q = quadrature(QuadratureKind::GaussLegendre, 1, 0.0, 1.0).unwrap();
        assert_eq!(q.nodes, vec![0.5]);
        assert_eq!(q.weights, vec![1.0]);
    }

    #[test]
    fn four_point_lobatto_matches_closed_form() {
        let q = quadrature(QuadratureKind::GaussLobatto, 4, -1.0, 1.0).unwrap();
        let r = 1.0 / 5f64.sqrt();
        assert_abs_diff_eq!(q.nodes[1], -r, epsilon = 1e-15);
        assert_abs_diff_eq!(q.weights[0], 1.0 / 12.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.weights[1], 5.0 / 12.0, epsilon = 1e-15);
    }

    #[test]
    fn rules_integrate_monomials_to_their_exactness() {
        for kind in [QuadratureKind::GaussLegendre, QuadratureKind::GaussLobatto] {
            for n in 2..12 {
                let q = quadrature(kind, n, -1.0, 1.0).unwrap();
                for p in 0..=q.exactness() {
                    let exact = if p % 2 == 1 { 0.0 } else { 1.0 / (p as f64 + 1.0) };
                    assert_abs_diff_eq!(q.mean(|x| x.powi(p as i32)), exact, epsilon = 1e-13);
                }
            }
        }
    }

    #[test]
    fn large_rule_weights_sum_to_one() {
        let q = quadrature(QuadratureKind::GaussLegendre, 1000, -1.0, 1.0).unwrap();
        assert_abs_diff_eq!(q.weights.iter().sum::<f64>(), 1.0, epsilon = 1e-13);
        assert!(q.nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(quadrature(QuadratureKind::GaussLobatto, 1, 0.0, 1.0).is_err());
        assert!(quadrature(QuadratureKind::GaussLegendre, 0, 0.0, 1.0).is_err());
        assert!(quadrature(QuadratureKind::GaussLegendre, 3, 1.0, 1.0).is_err());
    }
}
