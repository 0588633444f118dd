use super::{z_weights, CENTRAL_WEIGHT, CORNER_WEIGHT};

/// 3×3 block of means, `block[a + 1][b + 1]` for x-offset `a` and ξ-offset `b`.
pub type Stencil2D = [[f64; 3]; 3];

/// Total-degree-two polynomial
/// `p00 + p10 ζ + p01 η + p20 ζ² + p11 ζη + p02 η²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Poly2D {
    pub coeffs: [f64; 6],
}

impl Poly2D {
    pub fn constant(c: f64) -> Self {
        Self {
            coeffs: [c, 0.0, 0.0, 0.0, 0.0, 0.0],
        }
    }

    pub fn eval_local(&self, zeta: f64, eta: f64) -> f64 {
        let [p00, p10, p01, p20, p11, p02] = self.coeffs;
        p00 + p10 * zeta + p01 * eta + p20 * zeta * zeta + p11 * zeta * eta + p02 * eta * eta
    }

    pub fn cell_average(&self) -> f64 {
        let c = self.coeffs;
        c[0] + (c[3] + c[5]) / 12.0
    }

    /// Average over the x-cell as a function of the ξ-offset `eta`.
    pub fn x_average(&self, eta: f64) -> f64 {
        let [p00, _, p01, p20, _, p02] = self.coeffs;
        p00 + p20 / 12.0 + eta * (p01 + eta * p02)
    }

    /// Sum over all derivatives of the squared scaled derivative integrals.
    pub fn smoothness(&self) -> f64 {
        let [_, p10, p01, p20, p11, p02] = self.coeffs;
        p10 * p10
            + p01 * p01
            + (4.0 * p20 * p20 + 2.0 * p11 * p11 + 4.0 * p02 * p02) / 12.0
            + 4.0 * p20 * p20
            + p11 * p11
            + 4.0 * p02 * p02
    }

    fn scaled(self, f: f64) -> Poly2D {
        Poly2D {
            coeffs: self.coeffs.map(|c| c * f),
        }
    }

    fn combine(terms: &[(f64, Poly2D)]) -> Poly2D {
        let mut coeffs = [0.0; 6];
        for (w, p) in terms {
            for (c, v) in coeffs.iter_mut().zip(p.coeffs) {
                *c += w * v;
            }
        }
        Poly2D { coeffs }
    }
}

/// Least-squares quadratic through all nine means, exact on the center one.
fn central_fit(u: &Stencil2D) -> Poly2D {
    let center = u[1][1];
    let (mut sa, mut sb, mut saa, mut sab, mut sbb) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (ia, row) in u.iter().enumerate() {
        for (ib, &v) in row.iter().enumerate() {
            let (a, b) = (ia as f64 - 1.0, ib as f64 - 1.0);
            let d = v - center;
            sa += a * d;
            sb += b * d;
            saa += a * a * d;
            sab += a * b * d;
            sbb += b * b * d;
        }
    }
    // normal equations decouple; the two pure second-order terms share a 2×2 block
    let p10 = sa / 6.0;
    let p01 = sb / 6.0;
    let p11 = sab / 4.0;
    let p20 = (6.0 * saa - 4.0 * sbb) / 20.0;
    let p02 = (6.0 * sbb - 4.0 * saa) / 20.0;
    Poly2D {
        coeffs: [center - (p20 + p02) / 12.0, p10, p01, p20, p11, p02],
    }
}

/// Bilinear polynomial through the 2×2 sub-block towards `(sa, sb)`.
fn corner_fit(u: &Stencil2D, sa: i32, sb: i32) -> Poly2D {
    let at = |a: i32, b: i32| u[(a + 1) as usize][(b + 1) as usize];
    let (fa, fb) = (sa as f64, sb as f64);
    let c0 = at(0, 0);
    let c1 = (at(sa, 0) - c0) / fa;
    let c2 = (at(0, sb) - c0) / fb;
    let c3 = (at(sa, sb) - at(sa, 0) - at(0, sb) + c0) / (fa * fb);
    Poly2D {
        coeffs: [c0, c1, c2, 0.0, c3, 0.0],
    }
}

const CORNERS: [(i32, i32); 4] = [(-1, -1), (-1, 1), (1, -1), (1, 1)];

/// Two-dimensional CWENOZ on the center cell of a 3×3 block.
pub fn cwenoz_2d(u: &Stencil2D, dx: f64) -> Poly2D {
    let scale = u.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs()));
    if scale < f64::MIN_POSITIVE {
        return Poly2D::constant(u[1][1]);
    }
    let opt = central_fit(u);
    let corners = CORNERS.map(|(sa, sb)| corner_fit(u, sa, sb));
    let mut terms = vec![(1.0 / CENTRAL_WEIGHT, opt)];
    terms.extend(corners.iter().map(|&p| (-CORNER_WEIGHT / CENTRAL_WEIGHT, p)));
    let central = Poly2D::combine(&terms);

    let inv = 1.0 / scale;
    let beta = [opt, corners[0], corners[1], corners[2], corners[3]].map(|p| p.scaled(inv).smoothness());
    // diagonal pairs of opposite corners
    let tau = 0.5 * ((beta[1] - beta[4]).abs() + (beta[2] - beta[3]).abs());
    let eps = dx * dx;
    let w = z_weights(
        [CENTRAL_WEIGHT, CORNER_WEIGHT, CORNER_WEIGHT, CORNER_WEIGHT, CORNER_WEIGHT],
        beta,
        tau,
        eps,
    );
    let mut poly = Poly2D::combine(&[
        (w[0], central),
        (w[1], corners[0]),
        (w[2], corners[1]),
        (w[3], corners[2]),
        (w[4], corners[3]),
    ]);
    poly.coeffs[0] = u[1][1] - (poly.coeffs[3] + poly.coeffs[5]) / 12.0;
    poly
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weno::cwenoz_1d;
    use approx::assert_abs_diff_eq;

    fn block(f: impl Fn(f64, f64) -> f64) -> Stencil2D {
        let mut u = [[0.0; 3]; 3];
        for (ia, row) in u.iter_mut().enumerate() {
            for (ib, v) in row.iter_mut().enumerate() {
                *v = f(ia as f64 - 1.0, ib as f64 - 1.0);
            }
        }
        u
    }

    #[test]
    fn constant_block() {
        let p = cwenoz_2d(&block(|_, _| 1.75), 0.1);
        assert_eq!(p.coeffs, [1.75, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn bilinear_block_is_exact() {
        // averages of ζη over unit cells equal a·b
        let p = cwenoz_2d(&block(|a, b| a * b), 1.0);
        for (z, e) in [(0.5, 0.5), (-0.5, 0.2), (0.1, -0.4)] {
            assert_abs_diff_eq!(p.eval_local(z, e), z * e, epsilon = 1e-14);
        }
    }

    #[test]
    fn central_fit_is_exact_on_quadratics() {
        let q = |z: f64, e: f64| 0.2 + z - 0.5 * e + 1.5 * z * z - 0.7 * z * e + 0.4 * e * e;
        let mean = |a: f64, b: f64| {
            0.2 + a - 0.5 * b + 1.5 * (a * a + 1.0 / 12.0) - 0.7 * a * b + 0.4 * (b * b + 1.0 / 12.0)
        };
        let p = central_fit(&block(mean));
        for (z, e) in [(0.5, 0.5), (-0.5, 0.0), (0.3, -0.2)] {
            assert_abs_diff_eq!(p.eval_local(z, e), q(z, e), epsilon = 1e-14);
        }
    }

    #[test]
    fn reduces_to_one_dimension_on_xi_constant_data() {
        for means in [[0.0, 0.0, 1.0], [1.0, 0.2, -0.4], [0.5, 0.55, 0.61]] {
            let p2 = cwenoz_2d(&block(|a, _| means[(a + 1.0) as usize]), 0.02);
            let p1 = cwenoz_1d(means, 0.02);
            for z in [-0.5, 0.0, 0.5] {
                for e in [-0.5, 0.1, 0.5] {
                    assert_abs_diff_eq!(p2.eval_local(z, e), p1.eval_local(z), epsilon = 1e-13);
                }
            }
        }
    }

    #[test]
    fn mean_is_preserved() {
        let p = cwenoz_2d(&block(|a, b| (a + 2.0 * b).sin() + if a > 0.0 { 1.0 } else { 0.0 }), 0.05);
        assert_abs_diff_eq!(p.cell_average(), 0.0f64.sin(), epsilon = 1e-15);
    }
}
