//! Reference solutions and run reports for the preset cases.

use crate::basis::{quadrature, MultiElementBasis, QuadratureKind};
use crate::cases::Case;
use crate::diagnostics::{
    coarsen, l1_error, percentage_above, reference_element, reference_solution, sample_function, sample_gpc,
    sample_rows, CellMoments, RunReport, TV_XI_NODES,
};
use crate::error::{Error, Result};
use crate::models::reference::AdvectionSgSolution;
use crate::solver::{DeterministicProblem, GpcField, Mesh, RunOutcome, Solution, Solver, SolverConfig};
use serde::{Deserialize, Serialize};

/// Sampling parameters of the diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StudyOptions {
    /// ξ nodes on the reference element for total variations.
    pub tv_xi_nodes: usize,
    /// Fine-to-coarse cell ratio of sampled references.
    pub reference_refinement: usize,
    /// Deterministic solves on the reference element for sampled total
    /// variations.
    pub reference_tv_samples: usize,
    /// Deterministic solves per element for sampled moments.
    pub reference_nodes_per_element: usize,
    /// Component of the scalar errors and the percentage above.
    pub component: usize,
}

impl Default for StudyOptions {
    fn default() -> Self {
        Self {
            tv_xi_nodes: TV_XI_NODES,
            reference_refinement: 4,
            reference_tv_samples: 16,
            reference_nodes_per_element: 4,
            component: 0,
        }
    }
}

impl StudyOptions {
    pub fn validate(&self) -> Result<()> {
        if self.tv_xi_nodes < 2 || self.reference_refinement < 1 || self.reference_tv_samples < 2 {
            return Err(Error::Config("diagnostic sample counts too small".into()));
        }
        if self.reference_nodes_per_element < 1 {
            return Err(Error::Config("reference_nodes_per_element must be positive".into()));
        }
        Ok(())
    }
}

/// Moments on the run mesh and total variations on the reference element.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseReference {
    pub moments: CellMoments,
    pub tv_x: Vec<f64>,
    pub tv_xi: Vec<f64>,
}

fn deterministic_template(case: &Case, config: &SolverConfig, mesh: Mesh) -> DeterministicProblem {
    DeterministicProblem {
        model: case.model.clone(),
        mesh,
        boundary: case.boundary.clone(),
        reconstruction_degree: config.reconstruction_degree,
        cfl: config.cfl,
        rk_order: config.rk_order,
        t_end: config.t_end,
        xi: 0.0,
    }
}

/// Exact moments and total variations where a closed form exists, fine
/// deterministic solves at ξ nodes otherwise.
pub fn case_reference(case: &Case, config: &SolverConfig, opts: &StudyOptions) -> Result<CaseReference> {
    opts.validate()?;
    let m = case.n_components();
    let mesh = Mesh::new(case.x_range.0, case.x_range.1, config.n_cells)?;
    let basis = MultiElementBasis::new(case.domain, config.n_elements, config.degree)?;
    let interval = basis.element(reference_element(config.n_elements));
    let t = config.t_end;
    if let Some(exact) = &case.exact {
        let moments = CellMoments::of_function(&|x, xi, out: &mut [f64]| exact(t, x, xi, out), m, &mesh, case.domain);
        let (mut tv_x, mut tv_xi) = (Vec::new(), Vec::new());
        for c in 0..m {
            let f = |x: f64, xi: f64| {
                let mut buf = [0.0; crate::solver::MAX_COMPONENTS];
                exact(t, x, xi, &mut buf[..m]);
                buf[c]
            };
            let s = sample_function(&f, &mesh, interval, opts.tv_xi_nodes)?;
            tv_x.push(s.tv_x());
            tv_xi.push(s.tv_xi());
        }
        return Ok(CaseReference { moments, tv_x, tv_xi });
    }

    let fine = mesh.refined(opts.reference_refinement);
    let template = deterministic_template(case, config, fine);
    let (mut nodes, mut weights) = (Vec::new(), Vec::new());
    for j in 0..basis.n_elements() {
        let (a, b) = basis.element(j);
        let q = quadrature(QuadratureKind::GaussLegendre, opts.reference_nodes_per_element, a, b)?;
        nodes.extend(q.nodes);
        weights.extend(q.weights.iter().map(|w| w * basis.element_probability(j)));
    }
    let samples: Vec<Vec<f64>> = reference_solution(&template, case.initial.as_ref(), &nodes)?
        .iter()
        .map(|f| coarsen(f, opts.reference_refinement, m))
        .collect();
    let moments = CellMoments::from_samples(&samples, &weights, m)?;

    let q = quadrature(QuadratureKind::GaussLegendre, opts.reference_tv_samples, interval.0, interval.1)?;
    let solves = reference_solution(&template, case.initial.as_ref(), &q.nodes)?;
    let (mut tv_x, mut tv_xi) = (Vec::new(), Vec::new());
    for c in 0..m {
        let rows: Vec<Vec<f64>> = solves.iter().map(|s| s.iter().skip(c).step_by(m).copied().collect()).collect();
        let s = sample_rows(&rows, q.weights.clone(), &fine, config.reconstruction_degree, case.boundary.is_periodic())?;
        tv_x.push(s.tv_x());
        tv_xi.push(s.tv_xi());
    }
    Ok(CaseReference { moments, tv_x, tv_xi })
}

/// Total variations of every component of a Galerkin field on the
/// reference element.
pub fn field_total_variations(
    solver: &Solver,
    field: &GpcField,
    n_xi: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let config = solver.config();
    let element = reference_element(config.n_elements);
    let (mut tv_x, mut tv_xi) = (Vec::new(), Vec::new());
    for c in 0..field.n_components() {
        let s = sample_gpc(
            field,
            solver.basis(),
            solver.mesh(),
            config.reconstruction_degree,
            solver.boundary().is_periodic(),
            c,
            element,
            n_xi,
        )?;
        tv_x.push(s.tv_x());
        tv_xi.push(s.tv_xi());
    }
    Ok((tv_x, tv_xi))
}

/// Moments of a solution of either scheme.
pub fn solution_moments(solver: &Solver, solution: &Solution) -> CellMoments {
    match solution {
        Solution::Gpc(f) => CellMoments::of_field(f, solver.basis()),
        Solution::Means(f) => CellMoments::of_means(f, solver.basis()),
    }
}

/// Report of a finished run against a precomputed reference.
pub fn run_report(
    case: &Case,
    solver: &Solver,
    outcome: &RunOutcome,
    reference: &CaseReference,
    opts: &StudyOptions,
) -> Result<RunReport> {
    let config = solver.config();
    let m = case.n_components();
    if opts.component >= m {
        return Err(Error::Config(format!("component {} of a {m}-component model", opts.component)));
    }
    let gpc = solver.to_gpc(&outcome.solution, outcome.time)?;
    let moments = solution_moments(solver, &outcome.solution);
    let (l1_mean, l1_var) = l1_error(&moments, &reference.moments, solver.mesh().dx(), opts.component)?;
    let (tv_x, tv_xi) = field_total_variations(solver, &gpc, opts.tv_xi_nodes)?;
    let c = opts.component;
    Ok(RunReport {
        case: case.kind.name().to_string(),
        scheme: config.scheme.name().to_string(),
        n_cells: config.n_cells,
        n_elements: config.n_elements,
        degree: config.degree,
        reconstruction_degree: config.reconstruction_degree,
        t_end: config.t_end,
        steps: outcome.steps,
        component: c,
        l1_mean,
        l1_var,
        percentage_above_tv_x: percentage_above(tv_x[c], reference.tv_x[c]),
        tv_x,
        tv_xi,
        tv_x_reference: reference.tv_x.clone(),
        tv_xi_reference: reference.tv_xi.clone(),
        eoc: None,
        limiter_stats: outcome.stats.clone(),
        wall_time: outcome.wall_time,
    })
}

/// Runs `config` on `case` and reports against a freshly built reference.
pub fn run_case(case: &Case, config: SolverConfig, opts: &StudyOptions) -> Result<(RunOutcome, RunReport)> {
    let solver = case.solver(config)?;
    let outcome = solver.run(case.initial.as_ref())?;
    let reference = case_reference(case, &config, opts)?;
    let report = run_report(case, &solver, &outcome, &reference, opts)?;
    Ok((outcome, report))
}

/// `∫ |U_num - U_exact|₂ dx` between a single-element Galerkin advection
/// field and the exact Galerkin solution, using exact cell averages.
pub fn advection_sg_distance(field: &GpcField, mesh: &Mesh, t: f64) -> Result<f64> {
    if field.n_elements() != 1 || field.n_components() != 1 {
        return Err(Error::Config("advection Galerkin distance needs one element and one component".into()));
    }
    let exact = AdvectionSgSolution::new(field.n_modes() - 1)?;
    let dx = mesh.dx();
    Ok((0..mesh.n_cells)
        .map(|i| {
            let a = mesh.interface(i);
            let avg = exact.cell_average(t, a, a + dx);
            let block = field.block(i, 0);
            avg.iter().zip(block).map(|(e, u)| (e - u).powi(2)).sum::<f64>().sqrt() * dx
        })
        .sum())
}
