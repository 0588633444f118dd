use crate::error::Result;
use crate::models::ConservationLaw;

/// Largest state dimension handled by the stack buffers of the flux kernels.
pub const MAX_COMPONENTS: usize = 4;

/// Global Lax-Friedrichs flux `½(f(u⁻) + f(u⁺) - c(u⁺ - u⁻))`.
pub fn lax_friedrichs(
    model: &dyn ConservationLaw,
    u_minus: &[f64],
    u_plus: &[f64],
    xi: f64,
    c: f64,
    out: &mut [f64],
) -> Result<()> {
    let m = u_minus.len();
    debug_assert!(m <= MAX_COMPONENTS);
    let mut fm = [0.0; MAX_COMPONENTS];
    let mut fp = [0.0; MAX_COMPONENTS];
    model.flux(u_minus, xi, &mut fm[..m])?;
    model.flux(u_plus, xi, &mut fp[..m])?;
    for k in 0..m {
        out[k] = 0.5 * (fm[k] + fp[k] - c * (u_plus[k] - u_minus[k]));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{Advection, Burgers, Euler, EulerParams};

    #[test]
    fn burgers_opposing_states() {
        let mut out = [0.0];
        lax_friedrichs(&Burgers, &[1.0], &[-1.0], 0.0, 1.0, &mut out).unwrap();
        assert_eq!(out[0], 1.5);
    }

    #[test]
    fn consistency_is_exact() {
        let e = Euler::new(EulerParams::default()).unwrap();
        let u = [0.8, 0.3, 2.1];
        let mut f = [0.0; 3];
        let mut g = [0.0; 3];
        e.flux(&u, 0.0, &mut f).unwrap();
        lax_friedrichs(&e, &u, &u, 0.0, 3.7, &mut g).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn zero_viscosity_averages_fluxes() {
        let mut out = [0.0];
        lax_friedrichs(&Advection, &[1.0], &[3.0], 1.0, 0.0, &mut out).unwrap();
        assert_eq!(out[0], 4.0);
    }
}
