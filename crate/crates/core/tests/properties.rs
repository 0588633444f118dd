use proptest::prelude::*;
use uqhyp::basis::{quadrature, MultiElementBasis, QuadratureKind, RandomDomain};
use uqhyp::diagnostics::SampledField;
use uqhyp::limiters::{hyperbolicity_limit, minmod, slope_limit, LimiterConfig, THETA_TOLERANCE};
use uqhyp::models::{Burgers, ConservationLaw, Euler, EulerParams};
use uqhyp::solver::{lax_friedrichs, Boundary, GpcField, LimiterStats, Scheme, Solution, Solver, SolverConfig};
use uqhyp::weno::{cwenoz_1d, cwenoz_2d, reconstruct_row, RowBoundary, Stencil2D};

fn basis(n: usize, k: usize) -> MultiElementBasis {
    MultiElementBasis::new(RandomDomain::symmetric_unit(), n, k).unwrap()
}

fn field_from(values: &[f64], n_modes: usize, n_cells: usize, n_elements: usize) -> GpcField {
    let mut f = GpcField::zeros(n_modes, n_cells, n_elements, 1);
    for (d, v) in f.data_mut().iter_mut().zip(values.iter().cycle()) {
        *d = *v;
    }
    f
}

/// Spectral radius through repeated squaring of a normalized matrix.
fn spectral_radius(j: [[f64; 3]; 3]) -> f64 {
    let mul = |a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]| {
        let mut c = [[0.0; 3]; 3];
        for r in 0..3 {
            for s in 0..3 {
                c[r][s] = (0..3).map(|k| a[r][k] * b[k][s]).sum();
            }
        }
        c
    };
    let norm = |a: &[[f64; 3]; 3]| a.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
    let mut b = j;
    let mut log_scale = 0.0;
    let mut power = 1.0;
    for _ in 0..30 {
        b = mul(&b, &b);
        log_scale *= 2.0;
        power *= 2.0;
        let s = norm(&b);
        if s == 0.0 {
            return 0.0;
        }
        b.iter_mut().flatten().for_each(|v| *v /= s);
        log_scale += s.ln();
    }
    (log_scale / power).exp()
}

proptest! {
    #[test]
    fn minmod_bounds(a in -10.0..10.0f64, b in -10.0..10.0f64, c in -10.0..10.0f64) {
        let m = minmod(a, b, c);
        prop_assert!(m.abs() <= a.abs().min(b.abs()).min(c.abs()));
        prop_assert_eq!(minmod(a, a, a), a);
        if m != 0.0 {
            prop_assert!(m.signum() == a.signum() && m.signum() == b.signum() && m.signum() == c.signum());
        }
    }

    #[test]
    fn slope_limiter_is_idempotent_and_keeps_means(
        values in prop::collection::vec(-5.0..5.0f64, 60),
        degree in 1usize..4,
        tvbm in prop::sample::select(vec![0.0, 0.5, 10.0]),
    ) {
        let b = basis(5, degree);
        let t = b.monomial_transform();
        let config = LimiterConfig { tvbm_m: tvbm, ..LimiterConfig::default() };
        let field = field_from(&values, degree + 1, 4, 5);
        let once = slope_limit(&field, &b, &t, &config);
        let twice = slope_limit(&once, &b, &t, &config);
        prop_assert_eq!(once.data(), twice.data());
        for i in 0..4 {
            for j in 0..5 {
                prop_assert_eq!(field.coeff(0, i, j, 0).to_bits(), once.coeff(0, i, j, 0).to_bits());
            }
        }
    }

    #[test]
    fn consistent_lines_are_not_limited(offset in -3.0..3.0f64, slope in -2.0..2.0f64, degree in 1usize..4) {
        // u(ξ) = offset + slope ξ on five elements of width 0.4
        let b = basis(5, degree);
        let t = b.monomial_transform();
        let mut field = GpcField::zeros(degree + 1, 1, 5, 1);
        for j in 0..5 {
            let samples: Vec<f64> = b.element_nodes(j).iter().map(|xi| offset + slope * xi).collect();
            field.block_mut(0, j).copy_from_slice(&b.project(&samples, 1).unwrap());
        }
        let limited = slope_limit(&field, &b, &t, &LimiterConfig::default());
        for j in 1..4 {
            prop_assert_eq!(field.block(0, j), limited.block(0, j));
        }
    }

    #[test]
    fn hyperbolicity_limit_is_admissible_and_minimal(
        rho in 0.2..2.0f64,
        velocity in -1.0..1.0f64,
        pressure in 0.1..2.0f64,
        perturbation in prop::collection::vec(-1.5..1.5f64, 9),
    ) {
        let model = Euler::new(EulerParams::default()).unwrap();
        let b = basis(1, 2);
        let energy = pressure / 0.4 + 0.5 * rho * velocity * velocity;
        let mut block = vec![rho, rho * velocity, energy];
        block.extend(perturbation.iter().take(6));
        let eps = 1e-10;
        let (limited, theta) = hyperbolicity_limit(&block, &b, &model, eps).unwrap();
        let mut state = [0.0; 3];
        let eval_ok = |blk: &[f64], state: &mut [f64; 3]| {
            (0..b.n_nodes()).all(|r| {
                b.evaluate_at_node(blk, 3, r, state);
                model.admissible(state, eps * (1.0 - 1e-8))
            })
        };
        prop_assert!(eval_ok(&limited, &mut state));
        prop_assert_eq!(&limited[..3], &block[..3]);
        if theta > 0.0 {
            let relaxed = (theta - 10.0 * THETA_TOLERANCE).max(0.0);
            let mut weaker = block.clone();
            weaker[3..].iter_mut().for_each(|v| *v *= 1.0 - relaxed);
            prop_assert!(!eval_ok(&weaker, &mut state));
        }
    }

    #[test]
    fn cwenoz_keeps_means_and_scales(a in -5.0..5.0f64, b in -5.0..5.0f64, c in -5.0..5.0f64, k in -4.0..4.0f64) {
        let p = cwenoz_1d([a, b, c], 0.1);
        let tol = 1e-13 * (1.0 + a.abs().max(b.abs()).max(c.abs()));
        prop_assert!((p.cell_average() - b).abs() <= tol);
        let q = cwenoz_1d([k * a, k * b, k * c], 0.1);
        for z in [-0.5, 0.0, 0.5] {
            prop_assert!((q.eval_local(z) - k * p.eval_local(z)).abs() <= 1e-12 * (1.0 + k.abs()) * (1.0 + p.eval_local(z).abs()));
        }
    }

    #[test]
    fn cwenoz_2d_keeps_means(values in prop::collection::vec(-5.0..5.0f64, 9)) {
        let mut u: Stencil2D = [[0.0; 3]; 3];
        for (k, v) in values.iter().enumerate() {
            u[k / 3][k % 3] = *v;
        }
        let p = cwenoz_2d(&u, 0.05);
        prop_assert!((p.cell_average() - u[1][1]).abs() <= 1e-13 * 6.0);
    }

    #[test]
    fn reconstruction_of_a_jump_stays_in_range(lo in -1.0..1.0f64, gap in 1.0..4.0f64, at in 2usize..14) {
        let hi = lo + gap;
        let means: Vec<f64> = (0..16).map(|i| if i < at { lo } else { hi }).collect();
        let row = reconstruct_row(&means, 1.0 / 16.0, 2, &RowBoundary::Extrapolate).unwrap();
        let (min, max) = (lo - 0.05 * gap, hi + 0.05 * gap);
        for p in &row.polys {
            for z in [-0.5, -0.25, 0.0, 0.25, 0.5] {
                let v = p.eval_local(z);
                prop_assert!(v >= min - 1e-12 && v <= max + 1e-12, "{} outside [{}, {}]", v, min, max);
            }
        }
    }

    #[test]
    fn projection_reproduces_polynomials(coeffs in prop::collection::vec(-2.0..2.0f64, 1..6), n in 1usize..12) {
        let degree = coeffs.len() - 1;
        let b = basis(n, degree);
        for j in 0..n {
            let poly = |xi: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * xi + c);
            let samples: Vec<f64> = b.element_nodes(j).iter().map(|&xi| poly(xi)).collect();
            let block = b.project(&samples, 1).unwrap();
            let (lo, hi) = b.element(j);
            for s in [0.0, 0.3, 0.77, 1.0] {
                let xi = lo + s * (hi - lo);
                prop_assert!((b.evaluate(&block, 1, j, xi).unwrap()[0] - poly(xi)).abs() <= 1e-11);
            }
        }
    }

    #[test]
    fn moments_match_quadrature(values in prop::collection::vec(-3.0..3.0f64, 12)) {
        let b = basis(4, 2);
        let blocks: Vec<&[f64]> = values.chunks(3).collect();
        let (mean, var) = b.moments(blocks.iter().copied(), 1);
        let (mut e1, mut e2) = (0.0, 0.0);
        for (j, block) in blocks.iter().enumerate() {
            let (lo, hi) = b.element(j);
            let q = quadrature(QuadratureKind::GaussLegendre, 6, lo, hi).unwrap();
            let p = b.element_probability(j);
            e1 += p * q.mean(|xi| b.evaluate(block, 1, j, xi).unwrap()[0]);
            e2 += p * q.mean(|xi| b.evaluate(block, 1, j, xi).unwrap()[0].powi(2));
        }
        prop_assert!((mean[0] - e1).abs() <= 1e-12);
        prop_assert!((var[0] - (e2 - e1 * e1).max(0.0)).abs() <= 1e-11);
    }

    #[test]
    fn monomial_transform_round_trips(values in prop::collection::vec(-3.0..3.0f64, 4)) {
        let t = basis(3, 3).monomial_transform();
        let back = t.from_monomial(&t.to_monomial(&values));
        for (a, b) in back.iter().zip(&values) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn lax_friedrichs_is_consistent(rho in 0.1..3.0f64, m in -2.0..2.0f64, p in 0.1..3.0f64, c in 0.0..5.0f64, xi in -1.0..1.0f64) {
        let model = Euler::new(EulerParams::default()).unwrap();
        let u = [rho, m, p / 0.4 + 0.5 * m * m / rho];
        let (mut f, mut g) = ([0.0; 3], [0.0; 3]);
        model.flux(&u, xi, &mut f).unwrap();
        lax_friedrichs(&model, &u, &u, xi, c, &mut g).unwrap();
        prop_assert_eq!(f, g);
        let (mut f1, mut g1) = ([0.0], [0.0]);
        Burgers.flux(&[m], xi, &mut f1).unwrap();
        lax_friedrichs(&Burgers, &[m], &[m], xi, c, &mut g1).unwrap();
        prop_assert_eq!(f1, g1);
    }

    #[test]
    fn wavespeed_bounds_jacobian_spectrum(rho in 0.1..3.0f64, m in -2.0..2.0f64, p in 0.1..3.0f64) {
        let model = Euler::new(EulerParams::default()).unwrap();
        let u = [rho, m, p / 0.4 + 0.5 * m * m / rho];
        let h = 1e-6;
        let mut jac = [[0.0; 3]; 3];
        for col in 0..3 {
            let (mut up, mut um) = (u, u);
            up[col] += h;
            um[col] -= h;
            let (mut fp, mut fm) = ([0.0; 3], [0.0; 3]);
            model.flux(&up, 0.0, &mut fp).unwrap();
            model.flux(&um, 0.0, &mut fm).unwrap();
            for row in 0..3 {
                jac[row][col] = (fp[row] - fm[row]) / (2.0 * h);
            }
        }
        let radius = spectral_radius(jac);
        let bound = model.max_wavespeed(&u, 0.0).unwrap();
        prop_assert!(bound >= radius * (1.0 - 1e-4), "{} < {}", bound, radius);
    }

    #[test]
    fn total_variation_is_homogeneous(values in prop::collection::vec(-3.0..3.0f64, 20), k in -5.0..5.0f64) {
        let xw = vec![0.2; 5];
        let xiw = vec![0.25; 4];
        let s = SampledField::new(values.clone(), xw.clone(), xiw.clone()).unwrap();
        let scaled = SampledField::new(values.iter().map(|v| k * v).collect(), xw, xiw).unwrap();
        prop_assert!((scaled.tv_x() - k.abs() * s.tv_x()).abs() <= 1e-12 * (1.0 + s.tv_x()) * (1.0 + k.abs()));
        prop_assert!((scaled.tv_xi() - k.abs() * s.tv_xi()).abs() <= 1e-12 * (1.0 + s.tv_xi()) * (1.0 + k.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn periodic_steps_conserve_means(
        amplitude in 0.1..1.0f64,
        phase in 0.0..1.0f64,
        scheme in prop::sample::select(vec![Scheme::Sg, Scheme::WenoSg, Scheme::Weno2d]),
    ) {
        let config = SolverConfig {
            scheme,
            degree: 2,
            reconstruction_degree: 2,
            n_elements: 3,
            n_cells: 40,
            cfl: 0.45,
            t_end: 1.0,
            rk_order: 3,
            limiters: LimiterConfig { enable_hyperbolicity: false, ..LimiterConfig::default() },
        };
        let solver = Solver::new(config, (0.0, 1.0), RandomDomain::symmetric_unit(), std::sync::Arc::new(Burgers), Boundary::periodic()).unwrap();
        let initial = move |x: f64, xi: f64, out: &mut [f64]| {
            out[0] = 0.5 + amplitude * (2.0 * std::f64::consts::PI * (x + phase + 0.1 * xi)).sin();
        };
        let mut u = solver.initialize(&initial);
        let total = |s: &Solution| -> f64 {
            match s {
                Solution::Gpc(f) => (0..f.n_cells()).flat_map(|i| (0..f.n_elements()).map(move |j| f.coeff(0, i, j, 0))).sum(),
                Solution::Means(f) => f.data().iter().sum(),
            }
        };
        let mut stats = LimiterStats::default();
        let mut t = 0.0;
        for _ in 0..5 {
            let before = total(&u);
            t += solver.step(&mut u, t, 1.0, &mut stats).unwrap();
            prop_assert!((total(&u) - before).abs() <= 1e-12 * before.abs().max(1.0));
        }
    }
}

#[test]
fn trace_error_is_third_order() {
    let errors: Vec<f64> = [64usize, 128, 256, 512, 1024]
        .iter()
        .map(|&n| {
            let dx = 1.0 / n as f64;
            let means: Vec<f64> = (0..n)
                .map(|i| {
                    let (a, b) = (i as f64 * dx, (i + 1) as f64 * dx);
                    let w = 2.0 * std::f64::consts::PI;
                    (-(w * b).cos() + (w * a).cos()) / (w * dx)
                })
                .collect();
            let row = reconstruct_row(&means, dx, 2, &RowBoundary::Periodic).unwrap();
            row.minus
                .iter()
                .chain(&row.plus)
                .enumerate()
                .map(|(k, v)| {
                    let f = k % (n + 1);
                    (v - (2.0 * std::f64::consts::PI * f as f64 * dx).sin()).abs()
                })
                .fold(0.0, f64::max)
        })
        .collect();
    // coarse levels converge faster than third order while the weights settle
    for w in errors.windows(2) {
        assert!(w[0] / w[1] >= 0.85 * 8.0, "errors {errors:?}");
    }
    for w in errors[2..].windows(2) {
        let ratio = w[0] / w[1];
        assert!((ratio - 8.0).abs() <= 0.15 * 8.0, "ratio {ratio}, errors {errors:?}");
    }
}
