use crate::config::{ExperimentConfig, SweepParameter};
use crate::error::CliError;
use crate::output::{num, opt_num, write_field, write_moments, write_report, write_table};
use rayon::prelude::*;
use std::path::Path;
use uqhyp::cases::Case;
use uqhyp::diagnostics::{eoc, RunReport};
use uqhyp::solver::Scheme;
use uqhyp::study::{case_reference, run_case, run_report, solution_moments};

pub struct Context<'a> {
    pub config: &'a ExperimentConfig,
    pub output: &'a Path,
    pub quiet: bool,
}

impl Context<'_> {
    fn log(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }

    fn schemes(&self, default: &[Scheme]) -> Vec<Scheme> {
        self.config.schemes.clone().unwrap_or_else(|| default.to_vec())
    }

    fn stem(&self) -> &'static str {
        self.config.case.name()
    }
}

/// Single runs; writes field, moments and report per scheme.
pub fn run(ctx: &Context) -> Result<(), CliError> {
    let case = ctx.config.preset()?;
    for scheme in ctx.schemes(&[ctx.config.solver.scheme]) {
        let config = ctx.config.with_sweep_value(scheme, None);
        let solver = case.solver(config)?;
        let outcome = solver.run(case.initial.as_ref())?;
        let reference = case_reference(&case, &config, &ctx.config.study)?;
        let report = run_report(&case, &solver, &outcome, &reference, &ctx.config.study)?;
        let base = format!("{}_{}", ctx.stem(), scheme.name());
        let field = solver.to_gpc(&outcome.solution, outcome.time)?;
        write_field(&ctx.output.join(format!("{base}_field.csv")), &field)?;
        let moments = solution_moments(&solver, &outcome.solution);
        write_moments(&ctx.output.join(format!("{base}_moments.csv")), &moments, solver.mesh())?;
        write_report(&ctx.output.join(format!("{base}_report.json")), &report)?;
        ctx.log(format!(
            "{base}: {} steps, l1_mean {:.4e}, tv_x {:.4e}",
            report.steps, report.l1_mean, report.tv_x[report.component]
        ));
    }
    Ok(())
}

fn sweep_values(config: &ExperimentConfig, min_len: usize, command: &str) -> Result<(SweepParameter, Vec<usize>), CliError> {
    match &config.sweep {
        Some(s) if s.values.len() >= min_len => Ok((s.parameter, s.values.clone())),
        Some(s) => Err(CliError::Validation(vec![format!(
            "{command} needs at least {min_len} sweep values, got {}",
            s.values.len()
        )])),
        None => Err(CliError::Validation(vec![format!("{command} needs a sweep")])),
    }
}

fn pairwise_eoc(errors: &[f64], widths: &[f64]) -> Vec<Option<f64>> {
    let mut out = vec![None];
    for w in 0..errors.len().saturating_sub(1) {
        out.push(eoc(&errors[w..w + 2], &widths[w..w + 2]).ok().map(|o| o[0]));
    }
    out
}

/// Error table over a resolution sweep.
pub fn convergence(ctx: &Context) -> Result<(), CliError> {
    let (parameter, values) = sweep_values(ctx.config, 2, "convergence")?;
    let case = ctx.config.preset()?;
    let length = case.x_range.1 - case.x_range.0;
    let widths: Vec<f64> = values
        .iter()
        .map(|&v| match parameter {
            SweepParameter::NCells => length / v as f64,
            SweepParameter::NElements => 1.0 / v as f64,
        })
        .collect();
    let mut rows = Vec::new();
    for scheme in ctx.schemes(&[ctx.config.solver.scheme]) {
        let reports: Vec<RunReport> = values
            .par_iter()
            .map(|&v| {
                let config = ctx.config.with_sweep_value(scheme, Some(v));
                Ok(run_case(&case, config, &ctx.config.study)?.1)
            })
            .collect::<Result<_, CliError>>()?;
        let l1_mean: Vec<f64> = reports.iter().map(|r| r.l1_mean).collect();
        let l1_var: Vec<f64> = reports.iter().map(|r| r.l1_var).collect();
        let eoc_mean = pairwise_eoc(&l1_mean, &widths);
        let eoc_var = pairwise_eoc(&l1_var, &widths);
        for (n, v) in values.iter().enumerate() {
            rows.push(vec![
                scheme.name().to_string(),
                v.to_string(),
                num(l1_mean[n]),
                opt_num(eoc_mean[n]),
                num(l1_var[n]),
                opt_num(eoc_var[n]),
            ]);
        }
        let shown: Vec<String> = l1_mean.iter().map(|e| format!("{e:.4e}")).collect();
        ctx.log(format!("{} {}: l1_mean [{}]", ctx.stem(), scheme.name(), shown.join(", ")));
    }
    let header = ["scheme", parameter.label(), "l1_mean", "eoc_mean", "l1_var", "eoc_var"];
    write_table(&ctx.output.join(format!("{}_convergence.csv", ctx.stem())), &header, &rows)
}

fn tv_rows(case: &Case, ctx: &Context, schemes: &[Scheme], n_elements: usize) -> Result<Vec<Vec<String>>, CliError> {
    let Some(&first) = schemes.first() else {
        return Ok(Vec::new());
    };
    let study = &ctx.config.study;
    let c = study.component;
    let mut base = ctx.config.with_sweep_value(first, None);
    base.n_elements = n_elements;
    let reference = case_reference(case, &base, study)?;
    let reports: Vec<RunReport> = schemes
        .par_iter()
        .map(|&scheme| {
            let config = uqhyp::solver::SolverConfig { scheme, ..base };
            let solver = case.solver(config)?;
            let outcome = solver.run(case.initial.as_ref())?;
            Ok(run_report(case, &solver, &outcome, &reference, study)?)
        })
        .collect::<Result<_, CliError>>()?;
    let mut rows = vec![vec![
        "reference".to_string(),
        n_elements.to_string(),
        num(0.0),
        num(reference.tv_x[c]),
        num(reference.tv_xi[c]),
        num(0.0),
    ]];
    for r in &reports {
        rows.push(vec![
            r.scheme.clone(),
            n_elements.to_string(),
            num(r.l1_mean),
            num(r.tv_x[c]),
            num(r.tv_xi[c]),
            num(r.percentage_above_tv_x),
        ]);
    }
    Ok(rows)
}

/// Comparative total-variation table of several schemes on one case.
pub fn tvstudy(ctx: &Context) -> Result<(), CliError> {
    let case = ctx.config.preset()?;
    let schemes = ctx.schemes(&[Scheme::Sg, Scheme::WenoSg, Scheme::Weno2d]);
    let elements = match &ctx.config.sweep {
        None => vec![ctx.config.solver.n_elements],
        Some(s) if s.parameter == SweepParameter::NElements => s.values.clone(),
        Some(_) => {
            return Err(CliError::Validation(vec!["tvstudy sweeps n_elements only".into()]));
        }
    };
    let tables: Vec<Vec<Vec<String>>> = elements
        .par_iter()
        .map(|&n| tv_rows(&case, ctx, &schemes, n))
        .collect::<Result<_, CliError>>()?;
    let rows: Vec<Vec<String>> = tables.into_iter().flatten().collect();
    for row in &rows {
        ctx.log(format!("{} N={} pct_above {}", row[0], row[1], row[5]));
    }
    let header = ["scheme", "n_elements", "l1", "tv_x", "tv_xi", "pct_above"];
    write_table(&ctx.output.join(format!("{}_tvstudy.csv", ctx.stem())), &header, &rows)
}
