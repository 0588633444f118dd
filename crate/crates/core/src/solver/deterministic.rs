//! Finite-volume solver for one fixed realization of ξ, used for reference
//! solutions.

use super::{lax_friedrichs, Boundary, BoundaryKind, Mesh, MAX_COMPONENTS};
use crate::error::{Error, Result};
use crate::models::ConservationLaw;
use crate::weno::{ghost_width, row_traces};
use std::sync::Arc;

#[derive(Clone)]
pub struct DeterministicProblem {
    pub model: Arc<dyn ConservationLaw>,
    pub mesh: Mesh,
    pub boundary: Boundary,
    pub reconstruction_degree: usize,
    pub cfl: f64,
    pub rk_order: usize,
    pub t_end: f64,
    pub xi: f64,
}

struct Workspace {
    ext: Vec<f64>,
    traces: Vec<f64>,
    minus: Vec<f64>,
    plus: Vec<f64>,
}

impl DeterministicProblem {
    fn x_average(&self, f: &dyn Fn(f64, &mut [f64]), i: isize, out: &mut [f64]) {
        let rule = self.mesh.cell_rule();
        let m = out.len();
        let mut buf = [0.0; MAX_COMPONENTS];
        out.iter_mut().for_each(|v| *v = 0.0);
        let (c, dx) = (self.mesh.center(i), self.mesh.dx());
        for (z, w) in rule.nodes.iter().zip(&rule.weights) {
            f(c + z * dx, &mut buf[..m]);
            for k in 0..m {
                out[k] += w * buf[k];
            }
        }
    }

    fn ghost(&self, kind: &BoundaryKind, t: f64, cell: isize, m: usize) -> Option<[f64; MAX_COMPONENTS]> {
        let BoundaryKind::Dirichlet(f) = kind else {
            return None;
        };
        let mut out = [0.0; MAX_COMPONENTS];
        self.x_average(&|x, o: &mut [f64]| f(t, x, self.xi, o), cell, &mut out[..m]);
        Some(out)
    }

    fn rhs(&self, u: &[f64], t: f64, ws: &mut Workspace) -> Result<(Vec<f64>, f64)> {
        let model = self.model.as_ref();
        let m = model.n_components();
        let nx = self.mesh.n_cells;
        let g = ghost_width(self.reconstruction_degree);
        let periodic = self.boundary.is_periodic();
        let left: Vec<_> = (1..=g as isize).map(|s| self.ghost(&self.boundary.left, t, -s, m)).collect();
        let right: Vec<_> =
            (0..g as isize).map(|s| self.ghost(&self.boundary.right, t, nx as isize + s, m)).collect();
        let mut c_max = 0.0f64;
        for i in 0..nx {
            c_max = c_max.max(model.max_wavespeed(&u[i * m..(i + 1) * m], self.xi)?);
        }
        for c in 0..m {
            for i in 0..nx {
                ws.ext[g + i] = u[i * m + c];
            }
            for s in 0..g {
                ws.ext[g - 1 - s] = match left[s] {
                    Some(st) => st[c],
                    None if periodic => u[((nx - 1 - s % nx) % nx) * m + c],
                    None => u[c],
                };
                ws.ext[g + nx + s] = match right[s] {
                    Some(st) => st[c],
                    None if periodic => u[(s % nx) * m + c],
                    None => u[(nx - 1) * m + c],
                };
            }
            row_traces(&ws.ext, g, self.mesh.dx(), self.reconstruction_degree, &mut ws.minus, &mut ws.plus);
            for f in 0..=nx {
                ws.traces[(f * 2) * m + c] = ws.minus[f];
                ws.traces[(f * 2 + 1) * m + c] = ws.plus[f];
            }
        }
        for f in 0..=nx {
            for side in 0..2 {
                let s = &ws.traces[(f * 2 + side) * m..(f * 2 + side + 1) * m];
                c_max = c_max.max(model.max_wavespeed(s, self.xi)?);
            }
        }
        let mut fluxes = vec![0.0; (nx + 1) * m];
        for f in 0..=nx {
            let (um, up) = (&ws.traces[f * 2 * m..(f * 2 + 1) * m], &ws.traces[(f * 2 + 1) * m..(f * 2 + 2) * m]);
            lax_friedrichs(model, um, up, self.xi, c_max, &mut fluxes[f * m..(f + 1) * m])?;
        }
        let inv_dx = 1.0 / self.mesh.dx();
        let mut out = vec![0.0; nx * m];
        let rule = self.mesh.cell_rule();
        let mut src = [0.0; MAX_COMPONENTS];
        for i in 0..nx {
            for c in 0..m {
                out[i * m + c] = -inv_dx * (fluxes[(i + 1) * m + c] - fluxes[i * m + c]);
            }
            if model.has_source() {
                let x0 = self.mesh.center(i as isize);
                for (z, w) in rule.nodes.iter().zip(&rule.weights) {
                    if model.source(t, x0 + z * self.mesh.dx(), self.xi, &mut src[..m]).is_some() {
                        for c in 0..m {
                            out[i * m + c] += w * src[c];
                        }
                    }
                }
            }
        }
        Ok((out, c_max))
    }
}

fn combine(a: f64, u0: &[f64], b: f64, u: &[f64], dt: f64, r: &[f64]) -> Vec<f64> {
    u0.iter().zip(u).zip(r).map(|((x, y), z)| a * x + b * (y + dt * z)).collect()
}

/// Cell means `[i * m + c]` at `t_end` for the fixed realization `problem.xi`.
pub fn deterministic_solve(problem: &DeterministicProblem, initial: &dyn Fn(f64, f64, &mut [f64])) -> Result<Vec<f64>> {
    problem.boundary.validate()?;
    let m = problem.model.n_components();
    if m > MAX_COMPONENTS {
        return Err(Error::Config(format!("models with more than {MAX_COMPONENTS} components")));
    }
    if problem.reconstruction_degree != 0 && problem.reconstruction_degree != 2 {
        return Err(Error::Config(format!("reconstruction degree {}", problem.reconstruction_degree)));
    }
    if !(problem.cfl > 0.0) || !(1..=3).contains(&problem.rk_order) || !(problem.t_end >= 0.0) {
        return Err(Error::Config("cfl, rk order or end time out of range".into()));
    }
    let nx = problem.mesh.n_cells;
    let g = ghost_width(problem.reconstruction_degree);
    let mut u = vec![0.0; nx * m];
    for i in 0..nx {
        problem.x_average(&|x, o: &mut [f64]| initial(x, problem.xi, o), i as isize, &mut u[i * m..(i + 1) * m]);
    }
    let mut ws = Workspace {
        ext: vec![0.0; nx + 2 * g],
        traces: vec![0.0; (nx + 1) * 2 * m],
        minus: vec![0.0; nx + 1],
        plus: vec![0.0; nx + 1],
    };
    let t_end = problem.t_end;
    let mut t = 0.0;
    while t < t_end {
        let (r0, c) = problem.rhs(&u, t, &mut ws)?;
        let remaining = t_end - t;
        let dt = if c > 0.0 { (problem.cfl * problem.mesh.dx() / c).min(remaining) } else { remaining };
        let u1 = combine(0.0, &u, 1.0, &u, dt, &r0);
        u = match problem.rk_order {
            1 => u1,
            2 => {
                let (r1, _) = problem.rhs(&u1, t + dt, &mut ws)?;
                combine(0.5, &u, 0.5, &u1, dt, &r1)
            }
            _ => {
                let (r1, _) = problem.rhs(&u1, t + dt, &mut ws)?;
                let u2 = combine(0.75, &u, 0.25, &u1, dt, &r1);
                let (r2, _) = problem.rhs(&u2, t + 0.5 * dt, &mut ws)?;
                combine(1.0 / 3.0, &u, 2.0 / 3.0, &u2, dt, &r2)
            }
        };
        if !u.iter().all(|v| v.is_finite()) {
            return Err(Error::Numeric(format!("non-finite state at t = {t}")));
        }
        t = if t_end - (t + dt) <= 1e-14 * t_end.max(1.0) { t_end } else { t + dt };
    }
    Ok(u)
}
