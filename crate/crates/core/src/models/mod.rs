//! Conservation laws `∂t u + ∂x f(u, ξ) = s(t, x, ξ)`.

mod euler;
pub mod reference;

pub use euler::{Euler, EulerParams};

use crate::error::{Error, Result};

pub trait ConservationLaw: Send + Sync {
    fn name(&self) -> &'static str;

    fn n_components(&self) -> usize;

    /// Writes `f(u, ξ)` into `out`.
    fn flux(&self, u: &[f64], xi: f64, out: &mut [f64]) -> Result<()>;

    /// Upper bound of the characteristic speeds at `u`.
    fn max_wavespeed(&self, u: &[f64], xi: f64) -> Result<f64>;

    /// Membership in the admissible set with floor `eps`.
    fn admissible(&self, _u: &[f64], _eps: f64) -> bool {
        true
    }

    /// Source term; `None` when the law is homogeneous.
    fn source(&self, _t: f64, _x: f64, _xi: f64, _out: &mut [f64]) -> Option<()> {
        None
    }

    fn has_source(&self) -> bool {
        false
    }
}

/// Linear advection with uncertain speed `a(ξ) = 1.5 + 0.5 ξ`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Advection;

impl Advection {
    pub fn speed(xi: f64) -> f64 {
        1.5 + 0.5 * xi
    }
}

impl ConservationLaw for Advection {
    fn name(&self) -> &'static str {
        "advection"
    }

    fn n_components(&self) -> usize {
        1
    }

    fn flux(&self, u: &[f64], xi: f64, out: &mut [f64]) -> Result<()> {
        check_finite(u)?;
        out[0] = Self::speed(xi) * u[0];
        Ok(())
    }

    fn max_wavespeed(&self, u: &[f64], xi: f64) -> Result<f64> {
        check_finite(u)?;
        Ok(Self::speed(xi).abs())
    }
}

/// Inviscid Burgers equation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Burgers;

impl ConservationLaw for Burgers {
    fn name(&self) -> &'static str {
        "burgers"
    }

    fn n_components(&self) -> usize {
        1
    }

    fn flux(&self, u: &[f64], _xi: f64, out: &mut [f64]) -> Result<()> {
        check_finite(u)?;
        out[0] = 0.5 * u[0] * u[0];
        Ok(())
    }

    fn max_wavespeed(&self, u: &[f64], _xi: f64) -> Result<f64> {
        check_finite(u)?;
        Ok(u[0].abs())
    }
}

fn check_finite(u: &[f64]) -> Result<()> {
    if u.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Admissibility { state: u.to_vec() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flux1(law: &dyn ConservationLaw, u: f64, xi: f64) -> f64 {
        let mut out = [0.0];
        law.flux(&[u], xi, &mut out).unwrap();
        out[0]
    }

    #[test]
    fn advection_flux_values() {
        assert_eq!(flux1(&Advection, 2.0, 1.0), 4.0);
        assert_eq!(flux1(&Advection, 3.0, -1.0), 3.0);
        assert_eq!(flux1(&Advection, 0.0, 0.3), 0.0);
    }

    #[test]
    fn burgers_flux_values() {
        assert_eq!(flux1(&Burgers, 2.0, 0.0), 2.0);
        assert_eq!(flux1(&Burgers, -2.0, 0.0), 2.0);
        assert_eq!(flux1(&Burgers, 0.0, 0.0), 0.0);
        assert!(Burgers.admissible(&[-7.0], 1e-10));
    }

    #[test]
    fn non_finite_state_is_rejected() {
        let mut out = [0.0];
        assert!(Burgers.flux(&[f64::NAN], 0.0, &mut out).is_err());
    }
}
