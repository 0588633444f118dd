//! Limiters acting on the random variable.
//!
//! The slope limiter compares the linear monomial coefficient of each
//! element with the differences of neighboring element means and, where the
//! minmod test fails, replaces the element polynomial by a limited line with
//! the same mean. The hyperbolicity limiter damps all non-constant modes of
//! an element until every quadrature node state is admissible.

use crate::basis::{MonomialTransform, MultiElementBasis};
use crate::error::{Error, Result};
use crate::models::ConservationLaw;
use crate::solver::GpcField;
use serde::{Deserialize, Serialize};

/// Bisection tolerance on the damping factor.
pub const THETA_TOLERANCE: f64 = 1e-10;

/// Relative tolerance under which a slope counts as equal to its minmod.
const SLOPE_MATCH_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LimiterConfig {
    pub tvbm_m: f64,
    pub admissibility_eps: f64,
    pub enable_slope: bool,
    pub enable_hyperbolicity: bool,
}

impl Default for LimiterConfig {
    fn default() -> Self {
        Self {
            tvbm_m: 0.0,
            admissibility_eps: 1e-10,
            enable_slope: true,
            enable_hyperbolicity: true,
        }
    }
}

impl LimiterConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tvbm_m >= 0.0) || !self.tvbm_m.is_finite() {
            return Err(Error::Config(format!("tvbm_m = {} must be non-negative", self.tvbm_m)));
        }
        if !(self.admissibility_eps > 0.0) {
            return Err(Error::Config(format!(
                "admissibility_eps = {} must be positive",
                self.admissibility_eps
            )));
        }
        Ok(())
    }
}

pub fn minmod(a: f64, b: f64, c: f64) -> f64 {
    if a > 0.0 && b > 0.0 && c > 0.0 {
        a.min(b).min(c)
    } else if a < 0.0 && b < 0.0 && c < 0.0 {
        a.max(b).max(c)
    } else {
        0.0
    }
}

fn differs(slope: f64, limited: f64) -> bool {
    (slope - limited).abs() > SLOPE_MATCH_TOLERANCE * slope.abs().max(limited.abs())
}

/// Outcome of the minmod test for one component of one element.
#[derive(Debug, Clone, Copy, PartialEq)]
struct SlopeTest {
    troubled: bool,
    limited_slope: f64,
}

fn test_component(
    orth: &[f64],
    mean_left: f64,
    mean_right: f64,
    transform: &MonomialTransform,
    config: &LimiterConfig,
    element_width: f64,
) -> SlopeTest {
    let slope = transform.linear_coefficient(orth);
    let mean = orth[0];
    let limited_slope = minmod(slope, mean_right - mean, mean - mean_left);
    let mut troubled = differs(slope, limited_slope);
    if troubled && orth.len() > 2 && slope.abs() < config.tvbm_m * element_width * element_width {
        troubled = false;
    }
    SlopeTest {
        troubled,
        limited_slope,
    }
}

fn component(block: &[f64], m: usize, c: usize) -> Vec<f64> {
    block.iter().skip(c).step_by(m).copied().collect()
}

/// Troubled-cell flags per component of one element block.
pub fn troubled_cell(
    block: &[f64],
    m: usize,
    mean_left: &[f64],
    mean_right: &[f64],
    transform: &MonomialTransform,
    config: &LimiterConfig,
    element_width: f64,
) -> Vec<bool> {
    if transform.n_modes() < 2 {
        return vec![false; m];
    }
    (0..m)
        .map(|c| {
            test_component(&component(block, m, c), mean_left[c], mean_right[c], transform, config, element_width)
                .troubled
        })
        .collect()
}

/// Limits one element block in place; returns the number of limited components.
pub fn slope_limit_block(
    block: &mut [f64],
    m: usize,
    mean_left: &[f64],
    mean_right: &[f64],
    transform: &MonomialTransform,
    config: &LimiterConfig,
    element_width: f64,
) -> usize {
    let n = transform.n_modes();
    if n < 2 {
        return 0;
    }
    let mut limited = 0;
    for c in 0..m {
        let orth = component(block, m, c);
        let test = test_component(&orth, mean_left[c], mean_right[c], transform, config, element_width);
        if test.troubled {
            block[m + c] = transform.forward[(1, 1)] * test.limited_slope;
            for k in 2..n {
                block[k * m + c] = 0.0;
            }
            limited += 1;
        }
    }
    limited
}

/// Applies the slope limiter to every element of every cell; returns the
/// number of limited (cell, element, component) triples.
pub fn slope_limit_in_place(
    field: &mut GpcField,
    basis: &MultiElementBasis,
    transform: &MonomialTransform,
    config: &LimiterConfig,
) -> usize {
    let (nx, ne, m) = (field.n_cells(), field.n_elements(), field.n_components());
    let means: Vec<f64> = (0..ne)
        .flat_map(|j| (0..nx).flat_map(move |i| (0..m).map(move |c| (i, j, c))))
        .map(|(i, j, c)| field.coeff(0, i, j, c))
        .collect();
    let mean = |i: usize, j: usize| &means[(j * nx + i) * m..(j * nx + i + 1) * m];
    let width = basis.element_width();
    let mut count = 0;
    for j in 0..ne {
        let left = j.saturating_sub(1);
        let right = (j + 1).min(ne - 1);
        for i in 0..nx {
            count += slope_limit_block(
                field.block_mut(i, j),
                m,
                mean(i, left),
                mean(i, right),
                transform,
                config,
                width,
            );
        }
    }
    count
}

/// Functional form of [`slope_limit_in_place`].
pub fn slope_limit(
    field: &GpcField,
    basis: &MultiElementBasis,
    transform: &MonomialTransform,
    config: &LimiterConfig,
) -> GpcField {
    let mut out = field.clone();
    slope_limit_in_place(&mut out, basis, transform, config);
    out
}

pub fn is_admissible(state: &[f64], model: &dyn ConservationLaw, eps: f64) -> bool {
    model.admissible(state, eps)
}

/// Damps modes `k ≥ 1` of an element block by `1 - θ` with the smallest
/// `θ` that makes all element node states admissible. Returns `θ`.
///
/// Fails with [`Error::Admissibility`] when the element mean itself is
/// inadmissible.
pub fn hyperbolicity_limit_in_place(
    block: &mut [f64],
    basis: &MultiElementBasis,
    model: &dyn ConservationLaw,
    eps: f64,
) -> Result<f64> {
    let m = model.n_components();
    let nodes = basis.n_nodes();
    let mut values = vec![0.0; nodes * m];
    for rho in 0..nodes {
        basis.evaluate_at_node(block, m, rho, &mut values[rho * m..(rho + 1) * m]);
    }
    let mean = &block[..m];
    let mut state = vec![0.0; m];
    let mut admissible_at = |theta: f64| {
        (0..nodes).all(|rho| {
            for c in 0..m {
                state[c] = mean[c] + (1.0 - theta) * (values[rho * m + c] - mean[c]);
            }
            model.admissible(&state, eps)
        })
    };
    if admissible_at(0.0) {
        return Ok(0.0);
    }
    if !model.admissible(mean, eps) {
        return Err(Error::Admissibility { state: mean.to_vec() });
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > THETA_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if admissible_at(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    for v in &mut block[m..] {
        *v *= 1.0 - hi;
    }
    Ok(hi)
}

/// Functional form of [`hyperbolicity_limit_in_place`].
pub fn hyperbolicity_limit(
    block: &[f64],
    basis: &MultiElementBasis,
    model: &dyn ConservationLaw,
    eps: f64,
) -> Result<(Vec<f64>, f64)> {
    let mut out = block.to_vec();
    let theta = hyperbolicity_limit_in_place(&mut out, basis, model, eps)?;
    Ok((out, theta))
}

/// Grid resolution of [`compute_tvbm_m`] in each direction.
pub const TVBM_GRID: usize = 201;

/// Estimates `M = sup |∂ξ² u⁰|` over the critical points of `ξ ↦ u⁰(x, ξ)`.
///
/// `initial` writes the `m` components at `(x, ξ)`; the result is the
/// maximum over components.
pub fn compute_tvbm_m(
    initial: &dyn Fn(f64, f64, &mut [f64]),
    m: usize,
    x_range: (f64, f64),
    xi_range: (f64, f64),
    grid: usize,
) -> f64 {
    let grid = grid.max(5);
    let h = (xi_range.1 - xi_range.0) / (grid - 1) as f64;
    let mut best = 0.0f64;
    let mut column = vec![vec![0.0; grid]; m];
    let mut buf = vec![0.0; m];
    for ix in 0..grid {
        let x = x_range.0 + (x_range.1 - x_range.0) * ix as f64 / (grid - 1) as f64;
        for (k, _) in (0..grid).enumerate() {
            initial(x, xi_range.0 + k as f64 * h, &mut buf);
            for c in 0..m {
                column[c][k] = buf[c];
            }
        }
        for u in &column {
            let d1: Vec<f64> = (1..grid - 1).map(|k| (u[k + 1] - u[k - 1]) / (2.0 * h)).collect();
            let d2: Vec<f64> = (1..grid - 1)
                .map(|k| (u[k + 1] - 2.0 * u[k] + u[k - 1]) / (h * h))
                .collect();
            for k in 0..d1.len() {
                if d1[k] == 0.0 {
                    // strict extremum on a node; edges of flat plateaus do not count
                    if k > 0 && k + 1 < d1.len() && d1[k - 1] * d1[k + 1] < 0.0 {
                        best = best.max(d2[k].abs());
                    }
                } else if k + 1 < d1.len() && d1[k + 1] != 0.0 && d1[k] * d1[k + 1] < 0.0 {
                    let s = d1[k] / (d1[k] - d1[k + 1]);
                    best = best.max(((1.0 - s) * d2[k] + s * d2[k + 1]).abs());
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::RandomDomain;
    use crate::models::{Burgers, Euler, EulerParams};
    use approx::assert_abs_diff_eq;

    fn basis(n: usize, k: usize) -> MultiElementBasis {
        MultiElementBasis::new(RandomDomain::symmetric_unit(), n, k).unwrap()
    }

    #[test]
    fn minmod_cases() {
        assert_eq!(minmod(1.0, 2.0, 3.0), 1.0);
        assert_eq!(minmod(-1.0, 2.0, 3.0), 0.0);
        assert_eq!(minmod(-2.0, -1.0, -3.0), -1.0);
    }

    fn block_from_monomial(t: &MonomialTransform, mono: &[f64]) -> Vec<f64> {
        t.from_monomial(mono)
    }

    #[test]
    fn consistent_slope_is_not_troubled() {
        let b = basis(3, 1);
        let t = b.monomial_transform();
        let cfg = LimiterConfig::default();
        let block = block_from_monomial(&t, &[1.0, 1.0]);
        assert_eq!(troubled_cell(&block, 1, &[0.0], &[2.0], &t, &cfg, b.element_width()), vec![false]);
        let steep = block_from_monomial(&t, &[1.0, 3.0]);
        assert_eq!(troubled_cell(&steep, 1, &[0.0], &[2.0], &t, &cfg, b.element_width()), vec![true]);
    }

    #[test]
    fn tvbm_guard_skips_small_slopes() {
        let b = basis(3, 2);
        let t = b.monomial_transform();
        let cfg = LimiterConfig {
            tvbm_m: 100.0,
            ..LimiterConfig::default()
        };
        let block = block_from_monomial(&t, &[1.0, 3.0, 0.5]);
        assert_eq!(troubled_cell(&block, 1, &[0.0], &[2.0], &t, &cfg, b.element_width()), vec![false]);
    }

    #[test]
    fn quadratic_element_is_limited_to_a_line() {
        let b = basis(3, 2);
        let t = b.monomial_transform();
        let cfg = LimiterConfig::default();
        // mean zero: c0 + c2 E[s²] = c0 + 5/3 = 0
        let mut block = block_from_monomial(&t, &[-5.0 / 3.0, 3.0, 5.0]);
        assert_abs_diff_eq!(block[0], 0.0, epsilon = 1e-15);
        let n = slope_limit_block(&mut block, 1, &[-1.0], &[1.0], &t, &cfg, b.element_width());
        assert_eq!(n, 1);
        let mono = t.to_monomial(&block);
        assert_abs_diff_eq!(mono[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(mono[1], 1.0, epsilon = 1e-15);
        assert_eq!(mono[2], 0.0);
    }

    #[test]
    fn hyperbolicity_limit_keeps_admissible_blocks() {
        let b = basis(2, 2);
        let e = Euler::new(EulerParams::default()).unwrap();
        let block = vec![1.0, 0.0, 2.5, 0.1, 0.0, 0.1, 0.0, 0.0, 0.0];
        let (out, theta) = hyperbolicity_limit(&block, &b, &e, 1e-10).unwrap();
        assert_eq!(theta, 0.0);
        assert_eq!(out, block);
        let (out, theta) = hyperbolicity_limit(&[3.0], &basis(1, 0), &Burgers, 1e-10).unwrap();
        assert_eq!((out[0], theta), (3.0, 0.0));
    }

    #[test]
    fn hyperbolicity_limit_restores_positive_density() {
        let b = basis(1, 1);
        let e = Euler::new(EulerParams::default()).unwrap();
        // linear density perturbation of amplitude 2 around ρ = 1
        let block = vec![1.0, 0.0, 2.5, 2.0 / 3f64.sqrt(), 0.0, 0.0];
        let (out, theta) = hyperbolicity_limit(&block, &b, &e, 1e-10).unwrap();
        assert!(theta > 0.0);
        assert_eq!(&out[..3], &block[..3]);
        let mut s = vec![0.0; 3];
        for rho in 0..b.n_nodes() {
            b.evaluate_at_node(&out, 3, rho, &mut s);
            assert!(e.admissible(&s, 1e-10 * (1.0 - 1e-8)));
        }
    }

    #[test]
    fn inadmissible_mean_is_an_error() {
        let b = basis(1, 1);
        let e = Euler::new(EulerParams::default()).unwrap();
        let block = vec![-1.0, 0.0, 2.5, 0.5, 0.0, 0.0];
        assert!(matches!(hyperbolicity_limit(&block, &b, &e, 1e-10), Err(Error::Admissibility { .. })));
    }

    #[test]
    fn tvbm_constant_of_simple_profiles() {
        let sq = |_x: f64, xi: f64, out: &mut [f64]| out[0] = xi * xi;
        assert_abs_diff_eq!(compute_tvbm_m(&sq, 1, (0.0, 1.0), (-1.0, 1.0), TVBM_GRID), 2.0, epsilon = 1e-9);
        let flat = |x: f64, _xi: f64, out: &mut [f64]| out[0] = x.sin();
        assert_eq!(compute_tvbm_m(&flat, 1, (0.0, 1.0), (-1.0, 1.0), TVBM_GRID), 0.0);
        let step = |x: f64, xi: f64, out: &mut [f64]| out[0] = if x < 0.5 + 0.05 * xi { 1.0 } else { 0.125 };
        assert_eq!(compute_tvbm_m(&step, 1, (0.0, 1.0), (-1.0, 1.0), TVBM_GRID), 0.0);
    }
}
