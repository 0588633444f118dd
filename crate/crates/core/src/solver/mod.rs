//! Finite-volume discretization in x, Galerkin projection in ξ and strong
//! stability preserving Runge-Kutta time stepping.

mod boundary;
mod deterministic;
mod field;
mod flux;
mod mesh;
mod operators;

pub use boundary::{Boundary, BoundaryFn, BoundaryKind};
pub use deterministic::{deterministic_solve, DeterministicProblem};
pub use field::{CellMeanField, GpcField, Solution};
pub use flux::{lax_friedrichs, MAX_COMPONENTS};
pub use mesh::{Mesh, X_NODES};

use crate::basis::{
    orthonormal_legendre, quadrature, MonomialTransform, MultiElementBasis, QuadratureKind, QuadratureRule, RandomDomain,
};
use crate::error::{Error, Result};
use crate::limiters::{self, LimiterConfig};
use crate::models::ConservationLaw;
use crate::weno::Poly2D;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use std::time::Instant;

/// Pointwise initial data `(x, ξ) ↦ u⁰`.
pub type InitialFn = Arc<dyn Fn(f64, f64, &mut [f64]) + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Stochastic Galerkin without the slope limiter.
    Sg,
    /// Stochastic Galerkin with the ξ slope limiter.
    #[serde(rename = "wenosg")]
    WenoSg,
    /// Two-dimensional reconstruction on x-ξ cells.
    #[serde(rename = "weno2d")]
    Weno2d,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Sg => "sg",
            Scheme::WenoSg => "wenosg",
            Scheme::Weno2d => "weno2d",
        }
    }

    pub fn parse(s: &str) -> Option<Scheme> {
        match s.to_ascii_lowercase().as_str() {
            "sg" => Some(Scheme::Sg),
            "wenosg" => Some(Scheme::WenoSg),
            "weno2d" => Some(Scheme::Weno2d),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub scheme: Scheme,
    /// Polynomial degree in ξ per element.
    pub degree: usize,
    /// Reconstruction degree in x, 0 or 2.
    pub reconstruction_degree: usize,
    pub n_elements: usize,
    pub n_cells: usize,
    pub cfl: f64,
    pub t_end: f64,
    pub rk_order: usize,
    pub limiters: LimiterConfig,
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.reconstruction_degree != 0 && self.reconstruction_degree != 2 {
            problems.push(format!("reconstruction_degree = {} (expected 0 or 2)", self.reconstruction_degree));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            problems.push(format!("cfl = {} outside (0, 1]", self.cfl));
        }
        if !(1..=3).contains(&self.rk_order) {
            problems.push(format!("rk_order = {} (expected 1, 2 or 3)", self.rk_order));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            problems.push(format!("t_end = {} must be a non-negative number", self.t_end));
        }
        if self.n_elements == 0 {
            problems.push("n_elements must be positive".into());
        }
        if self.n_cells < 3 {
            problems.push(format!("n_cells = {} (need at least 3)", self.n_cells));
        }
        if let Err(e) = self.limiters.validate() {
            problems.push(e.to_string());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems.join("; ")))
        }
    }

    /// Whether the ξ slope limiter runs for this scheme.
    pub fn slope_limiter_active(&self) -> bool {
        self.scheme == Scheme::WenoSg && self.limiters.enable_slope
    }
}

/// Limiter activity accumulated over a run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LimiterStats {
    pub slope_limited: u64,
    pub hyperbolicity_limited: u64,
    /// Counts of θ > 0 in ten equal bins over (0, 1].
    pub theta_histogram: [u64; 10],
    pub theta_max: f64,
}

impl LimiterStats {
    fn record_theta(&mut self, theta: f64) {
        if theta > 0.0 {
            self.hyperbolicity_limited += 1;
            let bin = ((theta * 10.0).ceil() as usize).clamp(1, 10) - 1;
            self.theta_histogram[bin] += 1;
            self.theta_max = self.theta_max.max(theta);
        }
    }

    fn merge(&mut self, other: &LimiterStats) {
        self.slope_limited += other.slope_limited;
        self.hyperbolicity_limited += other.hyperbolicity_limited;
        for (a, b) in self.theta_histogram.iter_mut().zip(other.theta_histogram) {
            *a += b;
        }
        self.theta_max = self.theta_max.max(other.theta_max);
    }
}

/// Final state of a run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub solution: Solution,
    pub time: f64,
    pub steps: usize,
    pub stats: LimiterStats,
    pub wall_time: f64,
}

/// A configured discretization of one conservation law.
pub struct Solver {
    config: SolverConfig,
    mesh: Mesh,
    basis: MultiElementBasis,
    transform: MonomialTransform,
    model: Arc<dyn ConservationLaw>,
    boundary: Boundary,
    x_rule: QuadratureRule,
    /// Gauss rule on the reference element for source projections.
    source_rule: QuadratureRule,
    /// `φ_k` at the source nodes, `[q * n_modes + k]`.
    source_phi: Vec<f64>,
}

/// Gauss nodes per element for projecting source terms.
pub const SOURCE_XI_NODES: usize = 8;

impl Solver {
    pub fn new(
        config: SolverConfig,
        x_range: (f64, f64),
        domain: RandomDomain,
        model: Arc<dyn ConservationLaw>,
        boundary: Boundary,
    ) -> Result<Self> {
        config.validate()?;
        boundary.validate()?;
        if model.n_components() > MAX_COMPONENTS {
            return Err(Error::Config(format!("models with more than {MAX_COMPONENTS} components")));
        }
        let mesh = Mesh::new(x_range.0, x_range.1, config.n_cells)?;
        let basis = MultiElementBasis::new(domain, config.n_elements, config.degree)?;
        let transform = basis.monomial_transform();
        let x_rule = mesh.cell_rule();
        let source_rule = quadrature(QuadratureKind::GaussLegendre, SOURCE_XI_NODES, -1.0, 1.0)?;
        let source_phi = source_rule
            .nodes
            .iter()
            .flat_map(|&s| (0..basis.n_modes()).map(move |k| orthonormal_legendre(k, s)))
            .collect();
        Ok(Self {
            config,
            mesh,
            basis,
            transform,
            model,
            boundary,
            x_rule,
            source_rule,
            source_phi,
        })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn basis(&self) -> &MultiElementBasis {
        &self.basis
    }

    pub fn transform(&self) -> &MonomialTransform {
        &self.transform
    }

    pub fn model(&self) -> &dyn ConservationLaw {
        self.model.as_ref()
    }

    pub fn boundary(&self) -> &Boundary {
        &self.boundary
    }

    fn m(&self) -> usize {
        self.model.n_components()
    }

    /// x-cell average of `f` at fixed `xi`; ghost indices allowed.
    fn x_average(&self, f: &dyn Fn(f64, f64, &mut [f64]), i: isize, xi: f64, out: &mut [f64]) {
        let m = out.len();
        let mut buf = [0.0; MAX_COMPONENTS];
        out.iter_mut().for_each(|v| *v = 0.0);
        let (c, dx) = (self.mesh.center(i), self.mesh.dx());
        for (z, w) in self.x_rule.nodes.iter().zip(&self.x_rule.weights) {
            f(c + z * dx, xi, &mut buf[..m]);
            for k in 0..m {
                out[k] += w * buf[k];
            }
        }
    }

    /// Projects initial data onto the Galerkin coefficients.
    pub fn project_initial(&self, initial: &dyn Fn(f64, f64, &mut [f64])) -> GpcField {
        let m = self.m();
        let (nx, ne) = (self.mesh.n_cells, self.basis.n_elements());
        let mut field = GpcField::zeros(self.basis.n_modes(), nx, ne, m);
        let nodes = self.basis.n_nodes();
        let mut samples = vec![0.0; nodes * m];
        for j in 0..ne {
            let xi_nodes = self.basis.element_nodes(j);
            for i in 0..nx {
                for (rho, &xi) in xi_nodes.iter().enumerate() {
                    self.x_average(initial, i as isize, xi, &mut samples[rho * m..(rho + 1) * m]);
                }
                self.basis
                    .project_into(&samples, m, field.block_mut(i, j))
                    .expect("sample count matches the element rule");
            }
        }
        field
    }

    /// x-ξ cell means of initial data.
    pub fn cell_means_initial(&self, initial: &dyn Fn(f64, f64, &mut [f64])) -> CellMeanField {
        let m = self.m();
        let (nx, ne) = (self.mesh.n_cells, self.basis.n_elements());
        let mut field = CellMeanField::zeros(nx, ne, m);
        let mut buf = vec![0.0; m];
        for j in 0..ne {
            let xi_nodes = self.basis.element_nodes(j);
            for i in 0..nx {
                let state = field.state_mut(i, j);
                for (&xi, &w) in xi_nodes.iter().zip(self.basis.node_weights()) {
                    self.x_average(initial, i as isize, xi, &mut buf);
                    for c in 0..m {
                        state[c] += w * buf[c];
                    }
                }
            }
        }
        field
    }

    /// Initial state for the configured scheme.
    pub fn initialize(&self, initial: &dyn Fn(f64, f64, &mut [f64])) -> Solution {
        match self.config.scheme {
            Scheme::Weno2d => Solution::Means(self.cell_means_initial(initial)),
            Scheme::Sg | Scheme::WenoSg => Solution::Gpc(self.project_initial(initial)),
        }
    }

    /// Applies the stage limiters in place.
    pub fn apply_limiters(&self, solution: &mut Solution, stats: &mut LimiterStats) -> Result<()> {
        let Solution::Gpc(field) = solution else {
            return Ok(());
        };
        if self.config.slope_limiter_active() {
            stats.slope_limited +=
                limiters::slope_limit_in_place(field, &self.basis, &self.transform, &self.config.limiters) as u64;
        }
        if self.config.limiters.enable_hyperbolicity {
            let nx = field.n_cells();
            let block_len = field.block_len();
            let eps = self.config.limiters.admissibility_eps;
            let model = self.model.as_ref();
            let basis = &self.basis;
            let results: Vec<Result<LimiterStats>> = field
                .data_mut()
                .par_chunks_mut(nx * block_len)
                .enumerate()
                .map(|(j, slab)| {
                    let mut local = LimiterStats::default();
                    for (i, block) in slab.chunks_mut(block_len).enumerate() {
                        let theta = limiters::hyperbolicity_limit_in_place(block, basis, model, eps).map_err(|e| {
                            Error::Unrecoverable {
                                cell: i,
                                element: j,
                                node: 0,
                                detail: format!("hyperbolicity limiter: {e}"),
                            }
                        })?;
                        local.record_theta(theta);
                    }
                    Ok(local)
                })
                .collect();
            for r in results {
                stats.merge(&r?);
            }
        }
        Ok(())
    }

    /// Spatial operator and the global viscosity used in its fluxes.
    pub fn rhs(&self, solution: &Solution, t: f64, stats: &mut LimiterStats) -> Result<(Solution, f64)> {
        match solution {
            Solution::Gpc(f) => {
                let (r, c) = self.rhs_wenosg(f, t)?;
                Ok((Solution::Gpc(r), c))
            }
            Solution::Means(f) => {
                let (r, c, s) = self.rhs_weno2d(f, t)?;
                stats.merge(&s);
                Ok((Solution::Means(r), c))
            }
        }
    }

    /// Largest wave speed over node states and interface traces.
    pub fn global_viscosity(&self, solution: &Solution, t: f64) -> Result<f64> {
        let mut scratch = LimiterStats::default();
        Ok(self.rhs(solution, t, &mut scratch)?.1)
    }

    fn clamp_dt(&self, c: f64, t: f64, t_end: f64) -> f64 {
        let remaining = t_end - t;
        if c > 0.0 {
            (self.config.cfl * self.mesh.dx() / c).min(remaining)
        } else {
            remaining
        }
    }

    /// One SSP-RK step; returns the step size taken.
    pub fn step(&self, solution: &mut Solution, t: f64, t_end: f64, stats: &mut LimiterStats) -> Result<f64> {
        let u0 = solution.clone();
        let (r0, c) = self.rhs(&u0, t, stats)?;
        let dt = self.clamp_dt(c, t, t_end);
        let mut u1 = u0.clone();
        u1.stage_update(0.0, 1.0, &u0, dt, &r0)?;
        self.apply_limiters(&mut u1, stats)?;
        let next = match self.config.rk_order {
            1 => u1,
            2 => {
                let (r1, _) = self.rhs(&u1, t + dt, stats)?;
                let mut u = u0.clone();
                u.stage_update(0.5, 0.5, &u1, dt, &r1)?;
                self.apply_limiters(&mut u, stats)?;
                u
            }
            _ => {
                let (r1, _) = self.rhs(&u1, t + dt, stats)?;
                let mut u2 = u0.clone();
                u2.stage_update(0.75, 0.25, &u1, dt, &r1)?;
                self.apply_limiters(&mut u2, stats)?;
                let (r2, _) = self.rhs(&u2, t + 0.5 * dt, stats)?;
                let mut u = u0.clone();
                u.stage_update(1.0 / 3.0, 2.0 / 3.0, &u2, dt, &r2)?;
                self.apply_limiters(&mut u, stats)?;
                u
            }
        };
        if !next.data().iter().all(|v| v.is_finite()) {
            return Err(Error::Unrecoverable {
                cell: 0,
                element: 0,
                node: 0,
                detail: "non-finite coefficients after a step".into(),
            });
        }
        *solution = next;
        Ok(dt)
    }

    /// Integrates from the initial data to `t_end`.
    pub fn run(&self, initial: &dyn Fn(f64, f64, &mut [f64])) -> Result<RunOutcome> {
        self.run_with_observer(initial, |_, _, _| Ok(()))
    }

    /// As [`Solver::run`], calling `observer(step, t, solution)` after
    /// initialization and after every step.
    pub fn run_with_observer(
        &self,
        initial: &dyn Fn(f64, f64, &mut [f64]),
        mut observer: impl FnMut(usize, f64, &Solution) -> Result<()>,
    ) -> Result<RunOutcome> {
        let start = Instant::now();
        let mut stats = LimiterStats::default();
        let mut solution = self.initialize(initial);
        let t_end = self.config.t_end;
        let mut t = 0.0;
        let mut steps = 0;
        if t < t_end {
            self.apply_limiters(&mut solution, &mut stats)?;
        }
        observer(0, t, &solution)?;
        while t < t_end {
            let dt = self.step(&mut solution, t, t_end, &mut stats)?;
            steps += 1;
            t = if t_end - (t + dt) <= 1e-14 * t_end.max(1.0) { t_end } else { t + dt };
            observer(steps, t, &solution)?;
        }
        Ok(RunOutcome {
            solution,
            time: t,
            steps,
            stats,
            wall_time: start.elapsed().as_secs_f64(),
        })
    }

    /// Galerkin coefficients of any solution. For cell means, the ξ-profile
    /// of the x-averaged two-dimensional reconstruction is projected onto
    /// each element.
    pub fn to_gpc(&self, solution: &Solution, t: f64) -> Result<GpcField> {
        match solution {
            Solution::Gpc(f) => Ok(f.clone()),
            Solution::Means(f) => self.remap_means(f, t),
        }
    }

    fn remap_means(&self, field: &CellMeanField, t: f64) -> Result<GpcField> {
        let m = self.m();
        let (nx, ne) = (field.n_cells(), field.n_elements());
        let mut out = GpcField::zeros(self.basis.n_modes(), nx, ne, m);
        let etas: Vec<f64> = self.basis.reference_nodes().iter().map(|s| 0.5 * s).collect();
        let mut samples = vec![0.0; etas.len() * m];
        for j in 0..ne {
            let polys: Vec<Vec<Poly2D>> = (0..m).map(|c| self.element_polys(field, j, c, t)).collect();
            for i in 0..nx {
                for (rho, &eta) in etas.iter().enumerate() {
                    for c in 0..m {
                        samples[rho * m + c] = polys[c][i + 1].x_average(eta);
                    }
                }
                self.basis.project_into(&samples, m, out.block_mut(i, j))?;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Burgers;

    fn config(scheme: Scheme) -> SolverConfig {
        SolverConfig {
            scheme,
            degree: 1,
            reconstruction_degree: 2,
            n_elements: 2,
            n_cells: 8,
            cfl: 0.45,
            t_end: 0.1,
            rk_order: 3,
            limiters: LimiterConfig::default(),
        }
    }

    #[test]
    fn rejects_invalid_configs() {
        let mut c = config(Scheme::WenoSg);
        c.reconstruction_degree = 1;
        c.cfl = 1.5;
        let err = c.validate().unwrap_err().to_string();
        assert!(err.contains("reconstruction_degree") && err.contains("cfl"));
    }

    #[test]
    fn constant_field_is_stationary() {
        for scheme in [Scheme::Sg, Scheme::WenoSg, Scheme::Weno2d] {
            let solver = Solver::new(
                config(scheme),
                (0.0, 1.0),
                RandomDomain::symmetric_unit(),
                Arc::new(Burgers),
                Boundary::periodic(),
            )
            .unwrap();
            let init = |_x: f64, _xi: f64, out: &mut [f64]| out[0] = 0.7;
            let out = solver.run(&init).unwrap();
            let start = solver.initialize(&init);
            for (a, b) in out.solution.data().iter().zip(start.data()) {
                assert!((a - b).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn zero_end_time_returns_initialization() {
        let mut c = config(Scheme::WenoSg);
        c.t_end = 0.0;
        let solver =
            Solver::new(c, (0.0, 1.0), RandomDomain::symmetric_unit(), Arc::new(Burgers), Boundary::periodic())
                .unwrap();
        let init = |x: f64, xi: f64, out: &mut [f64]| out[0] = x + 0.1 * xi;
        let out = solver.run(&init).unwrap();
        assert_eq!(out.steps, 0);
        assert_eq!(out.solution, solver.initialize(&init));
        assert!(out.stats.slope_limited == 0);
    }
}
