//! Euler equations of an ideal gas in conserved variables `(ρ, m, E)`.

use super::{reference, ConservationLaw};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerParams {
    pub gamma: f64,
}

impl Default for EulerParams {
    fn default() -> Self {
        Self { gamma: 1.4 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Euler {
    params: EulerParams,
    manufactured_source: bool,
}

impl Euler {
    pub fn new(params: EulerParams) -> Result<Self> {
        if !(params.gamma > 1.0) {
            return Err(Error::Domain(format!("gamma = {} must exceed 1", params.gamma)));
        }
        Ok(Self {
            params,
            manufactured_source: false,
        })
    }

    /// Euler with the source that makes the manufactured smooth solution exact.
    pub fn with_manufactured_source(params: EulerParams) -> Result<Self> {
        let mut e = Self::new(params)?;
        e.manufactured_source = true;
        Ok(e)
    }

    pub fn gamma(&self) -> f64 {
        self.params.gamma
    }

    pub fn pressure(&self, u: &[f64]) -> f64 {
        (self.params.gamma - 1.0) * (u[2] - 0.5 * u[1] * u[1] / u[0])
    }

    fn checked_pressure(&self, u: &[f64]) -> Result<f64> {
        let p = self.pressure(u);
        if u[0] > 0.0 && p > 0.0 && u.iter().all(|v| v.is_finite()) {
            Ok(p)
        } else {
            Err(Error::Admissibility { state: u.to_vec() })
        }
    }
}

impl ConservationLaw for Euler {
    fn name(&self) -> &'static str {
        "euler"
    }

    fn n_components(&self) -> usize {
        3
    }

    fn flux(&self, u: &[f64], _xi: f64, out: &mut [f64]) -> Result<()> {
        let p = self.checked_pressure(u)?;
        let v = u[1] / u[0];
        out[0] = u[1];
        out[1] = u[1] * v + p;
        out[2] = (u[2] + p) * v;
        Ok(())
    }

    fn max_wavespeed(&self, u: &[f64], _xi: f64) -> Result<f64> {
        let p = self.checked_pressure(u)?;
        Ok((u[1] / u[0]).abs() + (self.params.gamma * p / u[0]).sqrt())
    }

    fn admissible(&self, u: &[f64], eps: f64) -> bool {
        u.iter().all(|v| v.is_finite()) && u[0] >= eps && self.pressure(u) >= eps
    }

    fn source(&self, t: f64, x: f64, xi: f64, out: &mut [f64]) -> Option<()> {
        if !self.manufactured_source {
            return None;
        }
        out.copy_from_slice(&reference::euler_manufactured_source(t, x, xi, self.params.gamma));
        Some(())
    }

    fn has_source(&self) -> bool {
        self.manufactured_source
    }
}
