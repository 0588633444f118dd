//! Experiment configuration files.
//!
//! A config is a JSON object. Only `case` is required:
//!
//! ```json
//! {
//!   "case": "burgers_sine",
//!   "schemes": ["sg", "wenosg", "weno2d"],
//!   "sweep": { "parameter": "n_cells", "values": [8, 16, 32] },
//!   "solver": { "n_cells": 200, "limiters": { "enable_slope": false } },
//!   "study": { "tv_xi_nodes": 1000 },
//!   "output_dir": "out"
//! }
//! ```
//!
//! Omitted solver fields take the case preset. `euler_sod` keeps the
//! hyperbolicity limiter on unless `solver.limiters.enable_hyperbolicity`
//! is given.

use crate::error::CliError;
use serde::Deserialize;
use std::path::{Path, PathBuf};
use uqhyp::cases::{Case, CaseKind};
use uqhyp::solver::{Scheme, SolverConfig};
use uqhyp::study::StudyOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    NCells,
    NElements,
}

impl SweepParameter {
    pub fn label(self) -> &'static str {
        match self {
            SweepParameter::NCells => "n_cells",
            SweepParameter::NElements => "n_elements",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub parameter: SweepParameter,
    pub values: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct LimiterOverrides {
    tvbm_m: Option<f64>,
    admissibility_eps: Option<f64>,
    enable_slope: Option<bool>,
    enable_hyperbolicity: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolverOverrides {
    degree: Option<usize>,
    reconstruction_degree: Option<usize>,
    n_elements: Option<usize>,
    n_cells: Option<usize>,
    cfl: Option<f64>,
    t_end: Option<f64>,
    rk_order: Option<usize>,
    #[serde(default)]
    limiters: LimiterOverrides,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    case: String,
    schemes: Option<Vec<String>>,
    sweep: Option<Sweep>,
    #[serde(default)]
    solver: SolverOverrides,
    #[serde(default)]
    study: StudyOptions,
    output_dir: Option<PathBuf>,
}

/// A validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub case: CaseKind,
    /// `None` means the command default.
    pub schemes: Option<Vec<Scheme>>,
    pub sweep: Option<Sweep>,
    /// Solver settings with the case preset applied; the scheme field is
    /// replaced per run.
    pub solver: SolverConfig,
    pub study: StudyOptions,
    pub output_dir: Option<PathBuf>,
    pub paper_scale: bool,
}

impl ExperimentConfig {
    pub fn load(path: &Path, paper_scale: bool) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, paper_scale)
    }

    pub fn parse(text: &str, paper_scale: bool) -> Result<Self, CliError> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| CliError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let mut problems = Vec::new();

        let case = match CaseKind::parse(&raw.case) {
            Ok(k) => Some(k),
            Err(e) => {
                problems.push(e.to_string());
                None
            }
        };
        let schemes = raw.schemes.as_ref().map(|names| {
            names
                .iter()
                .filter_map(|n| {
                    let s = Scheme::parse(n);
                    if s.is_none() {
                        problems.push(format!("unknown scheme '{n}'"));
                    }
                    s
                })
                .collect::<Vec<_>>()
        });
        if let Some(sweep) = &raw.sweep {
            if sweep.values.contains(&0) {
                problems.push("sweep values must be positive".into());
            }
            if sweep.values.windows(2).any(|w| w[0] >= w[1]) {
                problems.push("sweep values must be strictly increasing".into());
            }
        }
        let Some(case) = case else {
            return Err(CliError::Validation(problems));
        };

        let preset = preset(case, paper_scale)?;
        let mut solver = preset.defaults;
        let o = &raw.solver;
        solver.degree = o.degree.unwrap_or(solver.degree);
        solver.reconstruction_degree = o.reconstruction_degree.unwrap_or(solver.reconstruction_degree);
        solver.n_elements = o.n_elements.unwrap_or(solver.n_elements);
        solver.n_cells = o.n_cells.unwrap_or(solver.n_cells);
        solver.cfl = o.cfl.unwrap_or(solver.cfl);
        solver.t_end = o.t_end.unwrap_or(solver.t_end);
        solver.rk_order = o.rk_order.unwrap_or(solver.rk_order);
        let l = &o.limiters;
        solver.limiters.tvbm_m = l.tvbm_m.unwrap_or(solver.limiters.tvbm_m);
        solver.limiters.admissibility_eps = l.admissibility_eps.unwrap_or(solver.limiters.admissibility_eps);
        solver.limiters.enable_slope = l.enable_slope.unwrap_or(solver.limiters.enable_slope);
        solver.limiters.enable_hyperbolicity = match (case, l.enable_hyperbolicity) {
            (_, Some(v)) => v,
            (CaseKind::EulerSod, None) => true,
            (_, None) => solver.limiters.enable_hyperbolicity,
        };

        if let Err(e) = solver.validate() {
            problems.push(e.to_string());
        }
        if let Err(e) = raw.study.validate() {
            problems.push(e.to_string());
        }
        if raw.study.component >= preset.n_components() {
            problems.push(format!(
                "study.component = {} but {} has {} component(s)",
                raw.study.component,
                case,
                preset.n_components()
            ));
        }
        if !problems.is_empty() {
            return Err(CliError::Validation(problems));
        }
        Ok(Self {
            case,
            schemes,
            sweep: raw.sweep,
            solver,
            study: raw.study,
            output_dir: raw.output_dir,
            paper_scale,
        })
    }

    pub fn preset(&self) -> Result<Case, CliError> {
        preset(self.case, self.paper_scale)
    }

    /// Solver settings of one sweep entry.
    pub fn with_sweep_value(&self, scheme: Scheme, value: Option<usize>) -> SolverConfig {
        let mut config = SolverConfig { scheme, ..self.solver };
        if let (Some(sweep), Some(v)) = (&self.sweep, value) {
            match sweep.parameter {
                SweepParameter::NCells => config.n_cells = v,
                SweepParameter::NElements => config.n_elements = v,
            }
        }
        config
    }
}

fn preset(case: CaseKind, paper_scale: bool) -> Result<Case, CliError> {
    let preset = if paper_scale {
        Case::paper_scale(case)
    } else {
        Case::new(case)
    };
    Ok(preset?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_takes_preset() {
        let c = ExperimentConfig::parse(r#"{"case": "burgers_sine"}"#, false).unwrap();
        assert_eq!(c.solver.n_cells, 400);
        assert_eq!(c.solver.degree, 2);
        assert_eq!(c.solver.reconstruction_degree, 2);
        assert_eq!(c.solver.n_elements, 10);
        assert_eq!(c.solver.t_end, 0.4);
        assert!(c.schemes.is_none());
    }

    #[test]
    fn paper_scale_enlarges_mesh() {
        let c = ExperimentConfig::parse(r#"{"case": "burgers_sine"}"#, true).unwrap();
        assert_eq!(c.solver.n_cells, 2000);
    }

    #[test]
    fn unknown_case_is_rejected() {
        let e = ExperimentConfig::parse(r#"{"case": "shallow_water"}"#, false).unwrap_err();
        assert!(matches!(e, CliError::Validation(ref p) if p[0].contains("shallow_water")));
    }

    #[test]
    fn every_violation_is_listed() {
        let text = r#"{"case": "burgers_sine", "schemes": ["upwind"], "solver": {"cfl": 2.0, "rk_order": 7}}"#;
        let CliError::Validation(problems) = ExperimentConfig::parse(text, false).unwrap_err() else {
            panic!("expected a validation error");
        };
        let all = problems.join("\n");
        for needle in ["upwind", "cfl", "rk_order"] {
            assert!(all.contains(needle), "{needle} missing from {all}");
        }
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = ExperimentConfig::parse("{\n  \"case\": \"burgers_sine\",\n  oops\n}", false).unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 3, .. }), "{e:?}");
    }

    #[test]
    fn sod_keeps_hyperbolicity_unless_overridden() {
        let on = ExperimentConfig::parse(r#"{"case": "euler_sod"}"#, false).unwrap();
        assert!(on.solver.limiters.enable_hyperbolicity);
        let off = ExperimentConfig::parse(
            r#"{"case": "euler_sod", "solver": {"limiters": {"enable_hyperbolicity": false}}}"#,
            false,
        )
        .unwrap();
        assert!(!off.solver.limiters.enable_hyperbolicity);
    }

    #[test]
    fn sweep_must_increase() {
        let text = r#"{"case": "burgers_exact", "sweep": {"parameter": "n_cells", "values": [16, 8]}}"#;
        assert!(matches!(ExperimentConfig::parse(text, false), Err(CliError::Validation(_))));
    }

    #[test]
    fn sweep_value_replaces_parameter() {
        let text = r#"{"case": "euler_manufactured", "sweep": {"parameter": "n_elements", "values": [1, 2]}}"#;
        let c = ExperimentConfig::parse(text, false).unwrap();
        let s = c.with_sweep_value(Scheme::Sg, Some(2));
        assert_eq!(s.n_elements, 2);
        assert_eq!(s.scheme, Scheme::Sg);
    }
}
