//! Preset test cases: domains, models, boundary and initial data, exact
//! solutions where they exist, and default discretizations.

use crate::basis::{orthonormal_legendre, RandomDomain};
use crate::error::{Error, Result};
use crate::limiters::{compute_tvbm_m, LimiterConfig, TVBM_GRID};
use crate::models::reference::{advection_exact_sample, burgers_exact_modes, euler_manufactured};
use crate::models::{Advection, Burgers, ConservationLaw, Euler, EulerParams};
use crate::solver::{Boundary, BoundaryFn, BoundaryKind, InitialFn, Scheme, Solver, SolverConfig};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

/// Pointwise exact solution `(t, x, ξ) ↦ u`.
pub type ExactFn = Arc<dyn Fn(f64, f64, f64, &mut [f64]) + Send + Sync>;

/// Burgers exact-solution constants.
pub const BURGERS_C1: f64 = 1.0;
pub const BURGERS_C2: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseKind {
    AdvectionRiemann,
    BurgersExact,
    BurgersSine,
    EulerManufactured,
    EulerSod,
}

impl CaseKind {
    pub const ALL: [CaseKind; 5] = [
        CaseKind::AdvectionRiemann,
        CaseKind::BurgersExact,
        CaseKind::BurgersSine,
        CaseKind::EulerManufactured,
        CaseKind::EulerSod,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseKind::AdvectionRiemann => "advection_riemann",
            CaseKind::BurgersExact => "burgers_exact",
            CaseKind::BurgersSine => "burgers_sine",
            CaseKind::EulerManufactured => "euler_manufactured",
            CaseKind::EulerSod => "euler_sod",
        }
    }

    pub fn parse(s: &str) -> Result<CaseKind> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown case '{s}'")))
    }
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A fully specified experiment without its discretization parameters.
#[derive(Clone)]
pub struct Case {
    pub kind: CaseKind,
    pub x_range: (f64, f64),
    pub domain: RandomDomain,
    pub model: Arc<dyn ConservationLaw>,
    pub boundary: Boundary,
    pub initial: InitialFn,
    pub exact: Option<ExactFn>,
    /// Default discretization at desk scale.
    pub defaults: SolverConfig,
}

impl fmt::Debug for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Case")
            .field("kind", &self.kind)
            .field("x_range", &self.x_range)
            .field("domain", &self.domain)
            .field("boundary", &self.boundary)
            .field("defaults", &self.defaults)
            .finish_non_exhaustive()
    }
}

fn base_config(n_cells: usize, degree: usize, n_elements: usize, t_end: f64) -> SolverConfig {
    SolverConfig {
        scheme: Scheme::WenoSg,
        degree,
        reconstruction_degree: 2,
        n_elements,
        n_cells,
        cfl: 0.45,
        t_end,
        rk_order: 3,
        limiters: LimiterConfig {
            enable_hyperbolicity: false,
            ..LimiterConfig::default()
        },
    }
}

/// Initial data of the uncertain Sod problem.
pub fn sod_initial(x: f64, xi: f64, out: &mut [f64]) {
    let left = x < 0.5 + 0.05 * xi;
    out[0] = if left { 1.0 } else { 0.125 };
    out[1] = 0.0;
    out[2] = if left { 0.25 } else { 2.5 };
}

/// Exact Burgers solution as a point value in `(t, x, ξ)` on `[-1, 1]`.
pub fn burgers_exact_sample(t: f64, x: f64, xi: f64) -> f64 {
    let modes = burgers_exact_modes(t, x, BURGERS_C1, BURGERS_C2).expect("exact solution used for t < 1");
    modes.iter().enumerate().map(|(k, u)| u * orthonormal_legendre(k, xi)).sum()
}

impl Case {
    /// Desk-scale preset.
    pub fn new(kind: CaseKind) -> Result<Case> {
        let unit = RandomDomain::symmetric_unit();
        let case = match kind {
            CaseKind::AdvectionRiemann => {
                let inflow: BoundaryFn = Arc::new(|_t, _x, _xi, out: &mut [f64]| out[0] = 1.0);
                Case {
                    kind,
                    x_range: (0.4, 2.0),
                    domain: unit,
                    model: Arc::new(Advection),
                    boundary: Boundary {
                        left: BoundaryKind::Dirichlet(inflow),
                        right: BoundaryKind::Extrapolate,
                    },
                    initial: Arc::new(|x, xi, out: &mut [f64]| out[0] = advection_exact_sample(0.0, x, xi)),
                    exact: Some(Arc::new(|t, x, xi, out: &mut [f64]| out[0] = advection_exact_sample(t, x, xi))),
                    defaults: base_config(400, 2, 3, 0.5),
                }
            }
            CaseKind::BurgersExact => {
                let exact: ExactFn = Arc::new(|t, x, xi, out: &mut [f64]| out[0] = burgers_exact_sample(t, x, xi));
                let e = exact.clone();
                Case {
                    kind,
                    x_range: (0.0, 1.0),
                    domain: unit,
                    model: Arc::new(Burgers),
                    boundary: Boundary::dirichlet(exact.clone()),
                    initial: Arc::new(move |x, xi, out: &mut [f64]| e(0.0, x, xi, out)),
                    exact: Some(exact),
                    defaults: SolverConfig {
                        cfl: 0.1,
                        ..base_config(8, 2, 1, 0.2)
                    },
                }
            }
            CaseKind::BurgersSine => Case {
                kind,
                x_range: (0.0, 1.0),
                domain: unit,
                model: Arc::new(Burgers),
                boundary: Boundary::periodic(),
                initial: Arc::new(|x, xi, out: &mut [f64]| out[0] = (2.0 * PI * (x + 0.1 * xi)).sin()),
                exact: None,
                defaults: base_config(400, 2, 10, 0.4),
            },
            CaseKind::EulerManufactured => {
                let exact: ExactFn = Arc::new(|t, x, xi, out: &mut [f64]| {
                    out.copy_from_slice(&euler_manufactured(t, x, xi));
                });
                let e = exact.clone();
                let mut defaults = base_config(200, 0, 1, 0.5);
                defaults.limiters.enable_slope = false;
                Case {
                    kind,
                    x_range: (0.0, 2.0),
                    domain: unit,
                    model: Arc::new(Euler::with_manufactured_source(EulerParams::default())?),
                    boundary: Boundary::periodic(),
                    initial: Arc::new(move |x, xi, out: &mut [f64]| e(0.0, x, xi, out)),
                    exact: Some(exact),
                    defaults,
                }
            }
            CaseKind::EulerSod => {
                let mut defaults = base_config(400, 2, 3, 0.1);
                defaults.limiters.enable_hyperbolicity = true;
                Case {
                    kind,
                    x_range: (0.0, 1.0),
                    domain: unit,
                    model: Arc::new(Euler::new(EulerParams::default())?),
                    boundary: Boundary::extrapolate(),
                    initial: Arc::new(sod_initial),
                    exact: None,
                    defaults,
                }
            }
        };
        let mut case = case;
        case.defaults.limiters.tvbm_m = case.tvbm_m();
        Ok(case)
    }

    /// Preset with the large meshes of the original experiments.
    pub fn paper_scale(kind: CaseKind) -> Result<Case> {
        let mut case = Case::new(kind)?;
        case.defaults.n_cells = match kind {
            CaseKind::BurgersExact => case.defaults.n_cells,
            CaseKind::EulerManufactured => 1000,
            _ => 2000,
        };
        Ok(case)
    }

    pub fn n_components(&self) -> usize {
        self.model.n_components()
    }

    /// TVBM constant of the initial data.
    pub fn tvbm_m(&self) -> f64 {
        compute_tvbm_m(
            self.initial.as_ref(),
            self.n_components(),
            self.x_range,
            (self.domain.xi_left, self.domain.xi_right),
            TVBM_GRID,
        )
    }

    pub fn solver(&self, config: SolverConfig) -> Result<Solver> {
        Solver::new(config, self.x_range, self.domain, self.model.clone(), self.boundary.clone())
    }

    /// Default configuration with reconstruction degree `degree`; degree
    /// zero runs forward Euler at CFL 0.45.
    pub fn with_reconstruction(&self, degree: usize) -> SolverConfig {
        let mut config = self.defaults;
        config.reconstruction_degree = degree;
        if degree == 0 {
            config.rk_order = 1;
            config.cfl = 0.45;
        }
        config
    }

    /// Default configuration with a different scheme.
    pub fn config_for(&self, scheme: Scheme) -> SolverConfig {
        SolverConfig {
            scheme,
            ..self.defaults
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn names_round_trip() {
        for k in CaseKind::ALL {
            assert_eq!(CaseKind::parse(k.name()).unwrap(), k);
            let json = serde_json::to_string(&k).unwrap();
            assert_eq!(json, format!("\"{}\"", k.name()));
        }
        assert!(CaseKind::parse("shallow_water").is_err());
    }

    #[test]
    fn desk_defaults() {
        let c = Case::new(CaseKind::BurgersSine).unwrap();
        let d = c.defaults;
        assert_eq!((d.n_cells, d.degree, d.reconstruction_degree, d.n_elements), (400, 2, 2, 10));
        assert_eq!(d.t_end, 0.4);
        assert_abs_diff_eq!(d.limiters.tvbm_m, 0.04 * PI * PI, epsilon = 1e-3);
        assert!(Case::new(CaseKind::EulerSod).unwrap().defaults.limiters.enable_hyperbolicity);
        assert_eq!(Case::paper_scale(CaseKind::AdvectionRiemann).unwrap().defaults.n_cells, 2000);
    }

    #[test]
    fn burgers_initial_data_matches_modes() {
        let c = Case::new(CaseKind::BurgersExact).unwrap();
        let mut u = [0.0];
        (c.initial)(0.5, 1.0, &mut u);
        // -0.5 (1 + √3 + √5)
        assert_abs_diff_eq!(u[0], -0.5 * (1.0 + 3f64.sqrt() + 5f64.sqrt()), epsilon = 1e-14);
    }

    #[test]
    fn sod_states_are_admissible() {
        let c = Case::new(CaseKind::EulerSod).unwrap();
        let mut u = [0.0; 3];
        for x in [0.1, 0.49, 0.51, 0.9] {
            (c.initial)(x, 0.3, &mut u);
            assert!(c.model.admissible(&u, 1e-10));
        }
        assert_eq!(c.defaults.limiters.tvbm_m, 0.0);
    }
}
