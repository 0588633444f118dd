use super::{z_weights, CENTRAL_WEIGHT, SIDE_WEIGHT};

/// Quadratic `p0 + p1 ζ + p2 ζ²` on one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Poly1D {
    pub coeffs: [f64; 3],
}

impl Poly1D {
    pub fn constant(c: f64) -> Self {
        Self { coeffs: [c, 0.0, 0.0] }
    }

    pub fn eval_local(&self, zeta: f64) -> f64 {
        let [p0, p1, p2] = self.coeffs;
        p0 + zeta * (p1 + zeta * p2)
    }

    pub fn cell_average(&self) -> f64 {
        self.coeffs[0] + self.coeffs[2] / 12.0
    }

    /// Jiang-Shu indicator in scaled variables.
    pub fn smoothness(&self) -> f64 {
        let [_, p1, p2] = self.coeffs;
        p1 * p1 + 13.0 / 3.0 * p2 * p2
    }

    fn scaled(self, f: f64) -> Poly1D {
        Poly1D {
            coeffs: self.coeffs.map(|c| c * f),
        }
    }

    fn combine(terms: &[(f64, Poly1D)]) -> Poly1D {
        let mut coeffs = [0.0; 3];
        for (w, p) in terms {
            for (c, v) in coeffs.iter_mut().zip(p.coeffs) {
                *c += w * v;
            }
        }
        Poly1D { coeffs }
    }
}

/// Parabola whose averages over the three cells equal `means`.
pub fn optimal_parabola([a, b, c]: [f64; 3]) -> Poly1D {
    let second = a - 2.0 * b + c;
    Poly1D {
        coeffs: [b - second / 24.0, 0.5 * (c - a), 0.5 * second],
    }
}

/// CWENOZ reconstruction on the middle cell of three consecutive means.
pub fn cwenoz_1d(means: [f64; 3], dx: f64) -> Poly1D {
    let [a, b, c] = means;
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale < f64::MIN_POSITIVE {
        return Poly1D::constant(b);
    }
    let opt = optimal_parabola(means);
    let left = Poly1D { coeffs: [b, b - a, 0.0] };
    let right = Poly1D { coeffs: [b, c - b, 0.0] };
    let central = Poly1D::combine(&[
        (1.0 / CENTRAL_WEIGHT, opt),
        (-SIDE_WEIGHT / CENTRAL_WEIGHT, left),
        (-SIDE_WEIGHT / CENTRAL_WEIGHT, right),
    ]);
    // indicators of the data divided by `scale`, so ε = Δx²
    let inv = 1.0 / scale;
    let beta = [opt, left, right].map(|p| p.scaled(inv).smoothness());
    let tau = (beta[1] - beta[2]).abs();
    let eps = dx * dx;
    let w = z_weights([CENTRAL_WEIGHT, SIDE_WEIGHT, SIDE_WEIGHT], beta, tau, eps);
    let mut poly = Poly1D::combine(&[(w[0], central), (w[1], left), (w[2], right)]);
    // keep the mean exact against rounding in the combination
    poly.coeffs[0] = b - poly.coeffs[2] / 12.0;
    poly
}
