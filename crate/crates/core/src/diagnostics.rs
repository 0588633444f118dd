//! Error norms, total variation and convergence orders.

use crate::basis::{quadrature, MultiElementBasis, QuadratureKind, RandomDomain};
use crate::error::{Error, Result};
use crate::solver::{deterministic_solve, CellMeanField, DeterministicProblem, GpcField, LimiterStats, Mesh};
use crate::weno::{reconstruct_row, RowBoundary};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Default ξ nodes on the reference element for total variations.
pub const TV_XI_NODES: usize = 1000;
/// Gauss nodes per cell for exact x-averages.
const EXACT_X_NODES: usize = 8;
/// Gauss panels over the random domain for exact ξ-moments.
const EXACT_XI_PANELS: usize = 64;
const EXACT_XI_NODES: usize = 8;

/// Cell-averaged mean and variance, stored `[i * m + c]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellMoments {
    pub n_components: usize,
    pub mean: Vec<f64>,
    pub var: Vec<f64>,
}

impl CellMoments {
    pub fn n_cells(&self) -> usize {
        self.mean.len() / self.n_components
    }

    pub fn of_field(field: &GpcField, basis: &MultiElementBasis) -> Self {
        let m = field.n_components();
        let (mut mean, mut var) = (Vec::new(), Vec::new());
        for i in 0..field.n_cells() {
            let (e, v) = basis.moments((0..field.n_elements()).map(|j| field.block(i, j)), m);
            mean.extend(e);
            var.extend(v);
        }
        Self {
            n_components: m,
            mean,
            var,
        }
    }

    pub fn of_means(field: &CellMeanField, basis: &MultiElementBasis) -> Self {
        let m = field.n_components();
        let (mut mean, mut second) = (vec![0.0; field.n_cells() * m], vec![0.0; field.n_cells() * m]);
        for j in 0..field.n_elements() {
            let p = basis.element_probability(j);
            for i in 0..field.n_cells() {
                for c in 0..m {
                    let u = field.get(i, j, c);
                    mean[i * m + c] += p * u;
                    second[i * m + c] += p * u * u;
                }
            }
        }
        Self::from_raw(m, mean, second)
    }

    /// Moments from weighted samples `samples[s][i * m + c]` with
    /// probability weights summing to one.
    pub fn from_samples(samples: &[Vec<f64>], weights: &[f64], m: usize) -> Result<Self> {
        if samples.len() != weights.len() || samples.is_empty() {
            return Err(Error::Shape {
                expected: weights.len(),
                got: samples.len(),
            });
        }
        let len = samples[0].len();
        let (mut mean, mut second) = (vec![0.0; len], vec![0.0; len]);
        for (row, &w) in samples.iter().zip(weights) {
            for (idx, &u) in row.iter().enumerate() {
                mean[idx] += w * u;
                second[idx] += w * u * u;
            }
        }
        Ok(Self::from_raw(m, mean, second))
    }

    fn from_raw(m: usize, mean: Vec<f64>, second: Vec<f64>) -> Self {
        let var = mean.iter().zip(&second).map(|(e, s)| (s - e * e).max(0.0)).collect();
        Self {
            n_components: m,
            mean,
            var,
        }
    }

    /// Moments of the x-cell averages of a pointwise function, matching the
    /// moments of a field of cell means. Tensor Gauss quadrature.
    pub fn of_function(f: &(dyn Fn(f64, f64, &mut [f64]) + Sync), m: usize, mesh: &Mesh, domain: RandomDomain) -> Self {
        let xq = quadrature(QuadratureKind::GaussLegendre, EXACT_X_NODES, -0.5, 0.5).expect("fixed node count");
        let width = domain.width() / EXACT_XI_PANELS as f64;
        let panels: Vec<_> = (0..EXACT_XI_PANELS)
            .map(|p| {
                let a = domain.xi_left + p as f64 * width;
                quadrature(QuadratureKind::GaussLegendre, EXACT_XI_NODES, a, a + width).expect("fixed node count")
            })
            .collect();
        let dx = mesh.dx();
        let cells: Vec<(Vec<f64>, Vec<f64>)> = (0..mesh.n_cells)
            .into_par_iter()
            .map(|i| {
                let (mut mean, mut second) = (vec![0.0; m], vec![0.0; m]);
                let (mut u, mut avg) = (vec![0.0; m], vec![0.0; m]);
                let c0 = mesh.center(i as isize);
                for rule in &panels {
                    for (xi, wxi) in rule.nodes.iter().zip(&rule.weights) {
                        avg.iter_mut().for_each(|v| *v = 0.0);
                        for (z, wx) in xq.nodes.iter().zip(&xq.weights) {
                            f(c0 + z * dx, *xi, &mut u);
                            for c in 0..m {
                                avg[c] += wx * u[c];
                            }
                        }
                        let w = wxi / EXACT_XI_PANELS as f64;
                        for c in 0..m {
                            mean[c] += w * avg[c];
                            second[c] += w * avg[c] * avg[c];
                        }
                    }
                }
                (mean, second)
            })
            .collect();
        let (mean, second): (Vec<_>, Vec<_>) = cells.into_iter().unzip();
        Self::from_raw(m, mean.concat(), second.concat())
    }
}

/// `(L1 mean error, L1 variance error)` of component `c` by cell sums.
pub fn l1_error(numeric: &CellMoments, reference: &CellMoments, dx: f64, c: usize) -> Result<(f64, f64)> {
    if numeric.mean.len() != reference.mean.len() || numeric.n_components != reference.n_components {
        return Err(Error::Shape {
            expected: reference.mean.len(),
            got: numeric.mean.len(),
        });
    }
    let m = numeric.n_components;
    let dist = |a: &[f64], b: &[f64]| -> f64 {
        a.iter().zip(b).skip(c).step_by(m).map(|(x, y)| (x - y).abs()).sum::<f64>() * dx
    };
    Ok((dist(&numeric.mean, &reference.mean), dist(&numeric.var, &reference.var)))
}

/// Averages consecutive groups of `factor` fine cells, layout `[i * m + c]`.
pub fn coarsen(fine: &[f64], factor: usize, m: usize) -> Vec<f64> {
    let n = fine.len() / (m * factor);
    let mut out = vec![0.0; n * m];
    for i in 0..n {
        for s in 0..factor {
            for c in 0..m {
                out[i * m + c] += fine[((i * factor + s) * m) + c];
            }
        }
    }
    out.iter_mut().for_each(|v| *v /= factor as f64);
    out
}

/// Values of one component on the x-node chain (Lobatto nodes of every cell
/// in order) at a set of ξ samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    /// Integration weights of the chain nodes, `Δx` times the cell weights.
    pub x_weights: Vec<f64>,
    /// Probability weights of the ξ samples.
    pub xi_weights: Vec<f64>,
    /// `values[r * n_x + q]`.
    pub values: Vec<f64>,
}

impl SampledField {
    pub fn new(values: Vec<f64>, x_weights: Vec<f64>, xi_weights: Vec<f64>) -> Result<Self> {
        if values.len() != x_weights.len() * xi_weights.len() {
            return Err(Error::Shape {
                expected: x_weights.len() * xi_weights.len(),
                got: values.len(),
            });
        }
        Ok(Self {
            x_weights,
            xi_weights,
            values,
        })
    }

    fn n_x(&self) -> usize {
        self.x_weights.len()
    }

    /// `∫ Σ_q |u(x_q, ξ) - u(x_{q-1}, ξ)| f dξ`.
    pub fn tv_x(&self) -> f64 {
        let n = self.n_x();
        self.values
            .chunks(n)
            .zip(&self.xi_weights)
            .map(|(row, w)| w * row.windows(2).map(|p| (p[1] - p[0]).abs()).sum::<f64>())
            .sum()
    }

    /// `∫ Σ_r |u(x, ξ_r) - u(x, ξ_{r-1})| dx`.
    pub fn tv_xi(&self) -> f64 {
        let n = self.n_x();
        let rows: Vec<&[f64]> = self.values.chunks(n).collect();
        (0..n)
            .map(|q| {
                self.x_weights[q] * rows.windows(2).map(|p| (p[1][q] - p[0][q]).abs()).sum::<f64>()
            })
            .sum()
    }
}

/// Chain nodes and weights over the whole mesh.
pub fn x_chain(mesh: &Mesh) -> (Vec<f64>, Vec<f64>) {
    let rule = mesh.cell_rule();
    let dx = mesh.dx();
    let mut nodes = Vec::with_capacity(rule.len() * mesh.n_cells);
    let mut weights = Vec::with_capacity(rule.len() * mesh.n_cells);
    for i in 0..mesh.n_cells {
        let c = mesh.center(i as isize);
        for (z, w) in rule.nodes.iter().zip(&rule.weights) {
            nodes.push(c + z * dx);
            weights.push(w * dx);
        }
    }
    (nodes, weights)
}

/// Index of the element used for total variations: the one containing the
/// centre of the random domain (the upper one when it lies on a boundary).
pub fn reference_element(n_elements: usize) -> usize {
    n_elements / 2
}

fn xi_rule(interval: (f64, f64), n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let q = quadrature(QuadratureKind::GaussLegendre, n, interval.0, interval.1)?;
    Ok((q.nodes, q.weights))
}

/// Samples rows of cell means, reconstructed in x with `degree`, on the
/// chain nodes. `rows[r]` holds the means at ξ sample `r`.
pub fn sample_rows(rows: &[Vec<f64>], xi_weights: Vec<f64>, mesh: &Mesh, degree: usize, periodic: bool) -> Result<SampledField> {
    let rule = mesh.cell_rule();
    let boundary = if periodic { RowBoundary::Periodic } else { RowBoundary::Extrapolate };
    let sampled: Vec<Vec<f64>> = rows
        .par_iter()
        .map(|row| -> Result<Vec<f64>> {
            let rec = reconstruct_row(row, mesh.dx(), degree, &boundary)?;
            Ok(rec.polys.iter().flat_map(|p| rule.nodes.iter().map(move |&z| p.eval_local(z))).collect())
        })
        .collect::<Result<_>>()?;
    SampledField::new(sampled.concat(), x_chain(mesh).1, xi_weights)
}

/// Samples component `c` of a Galerkin field on element `element` at
/// `n_xi` Gauss nodes.
#[allow(clippy::too_many_arguments)]
pub fn sample_gpc(
    field: &GpcField,
    basis: &MultiElementBasis,
    mesh: &Mesh,
    degree: usize,
    periodic: bool,
    c: usize,
    element: usize,
    n_xi: usize,
) -> Result<SampledField> {
    let m = field.n_components();
    let (nodes, weights) = xi_rule(basis.element(element), n_xi)?;
    let rows: Vec<Vec<f64>> = nodes
        .par_iter()
        .map(|&xi| -> Result<Vec<f64>> {
            let phi: Vec<f64> =
                (0..basis.n_modes()).map(|k| basis.eval_basis(element, k, xi)).collect::<Result<_>>()?;
            Ok((0..field.n_cells())
                .map(|i| {
                    let block = field.block(i, element);
                    phi.iter().enumerate().map(|(k, p)| block[k * m + c] * p).sum()
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    sample_rows(&rows, weights, mesh, degree, periodic)
}

/// Samples a pointwise function on the chain nodes over `interval` in ξ.
pub fn sample_function(
    f: &(dyn Fn(f64, f64) -> f64 + Sync),
    mesh: &Mesh,
    interval: (f64, f64),
    n_xi: usize,
) -> Result<SampledField> {
    let (nodes, weights) = xi_rule(interval, n_xi)?;
    let (xs, xw) = x_chain(mesh);
    let values: Vec<f64> = nodes.par_iter().flat_map_iter(|&xi| xs.iter().map(move |&x| f(x, xi))).collect();
    SampledField::new(values, xw, weights)
}

/// Experimental orders `log(e_{i-1}/e_i) / log(h_{i-1}/h_i)`.
pub fn eoc(errors: &[f64], widths: &[f64]) -> Result<Vec<f64>> {
    if errors.len() != widths.len() {
        return Err(Error::Shape {
            expected: widths.len(),
            got: errors.len(),
        });
    }
    if let Some(e) = errors.iter().find(|e| !(**e > 0.0) || !e.is_finite()) {
        return Err(Error::UndefinedOrder(format!("error {e} is not positive")));
    }
    if widths.windows(2).any(|w| !(w[1] < w[0]) || !(w[1] > 0.0)) {
        return Err(Error::UndefinedOrder("mesh widths must decrease strictly".into()));
    }
    Ok(errors
        .windows(2)
        .zip(widths.windows(2))
        .map(|(e, h)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln())
        .collect())
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::Shape {
            expected: x.len().max(2),
            got: y.len(),
        });
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0)) {
        return Err(Error::UndefinedOrder("log-log fit of non-positive data".into()));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Log-log slope over the asymptotic range of a resolution sweep: the
/// first `skip` points are dropped, and the fit stops once a local slope
/// falls below half of the first retained one.
pub fn pre_floor_slope(x: &[f64], y: &[f64], skip: usize) -> Result<f64> {
    if x.len() != y.len() || x.len() < skip + 2 {
        return Err(Error::Shape {
            expected: skip + 2,
            got: x.len().min(y.len()),
        });
    }
    let (x, y) = (&x[skip..], &y[skip..]);
    let local = |i: usize| -> f64 { (y[i] / y[i + 1]).ln() / (x[i + 1] / x[i]).ln() };
    let leading = local(0);
    let mut end = 2;
    while end < x.len() && local(end - 1) >= 0.5 * leading {
        end += 1;
    }
    loglog_slope(&x[..end], &y[..end]).map(|s| -s)
}

/// `100 (tv / tv_ref - 1)`.
pub fn percentage_above(tv: f64, tv_reference: f64) -> f64 {
    100.0 * (tv / tv_reference - 1.0)
}

/// Fine-grid solves at fixed ξ values; returns `[sample][i * m + c]`.
pub fn reference_solution(
    template: &DeterministicProblem,
    initial: &(dyn Fn(f64, f64, &mut [f64]) + Sync),
    xi: &[f64],
) -> Result<Vec<Vec<f64>>> {
    xi.par_iter()
        .map(|&x| {
            let problem = DeterministicProblem {
                xi: x,
                ..template.clone()
            };
            deterministic_solve(&problem, initial)
        })
        .collect()
}

/// Diagnostics of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub case: String,
    pub scheme: String,
    pub n_cells: usize,
    pub n_elements: usize,
    pub degree: usize,
    pub reconstruction_degree: usize,
    pub t_end: f64,
    pub steps: usize,
    /// Component the scalar errors refer to.
    pub component: usize,
    pub l1_mean: f64,
    pub l1_var: f64,
    /// Per component, on the reference element.
    pub tv_x: Vec<f64>,
    pub tv_xi: Vec<f64>,
    pub tv_x_reference: Vec<f64>,
    pub tv_xi_reference: Vec<f64>,
    pub percentage_above_tv_x: f64,
    pub eoc: Option<Vec<f64>>,
    pub limiter_stats: LimiterStats,
    /// Not serialized so reports are reproducible byte for byte.
    #[serde(skip)]
    pub wall_time: f64,
}
