//! Spatial operators `L_h = -(F_{i+1/2} - F_{i-1/2}) / Δx` of both schemes.

use super::{BoundaryKind, CellMeanField, GpcField, LimiterStats, Solver, MAX_COMPONENTS};
use crate::error::{Error, Result};
use crate::limiters;
use crate::models::ConservationLaw;
use crate::weno::{cwenoz_2d, ghost_width, row_traces, Poly2D, Stencil2D};
use rayon::prelude::*;

/// Interface traces of one element: `[(rho * n_faces + f) * 2 + side] * m + c`,
/// side 0 from the left cell, side 1 from the right cell.
struct ElementTraces {
    values: Vec<f64>,
    max_speed: f64,
    stats: LimiterStats,
}

fn unrecoverable(cell: usize, element: usize, node: usize, detail: String) -> Error {
    Error::Unrecoverable {
        cell,
        element,
        node,
        detail,
    }
}

impl Solver {
    fn ghost_states(
        &self,
        kind: &BoundaryKind,
        t: f64,
        cells: impl Iterator<Item = isize>,
        xi_nodes: &[f64],
        weights: &[f64],
        m: usize,
    ) -> Option<Vec<f64>> {
        let BoundaryKind::Dirichlet(f) = kind else {
            return None;
        };
        let g = |x: f64, xi: f64, out: &mut [f64]| f(t, x, xi, out);
        let mut out = Vec::new();
        let mut avg = [0.0; MAX_COMPONENTS];
        let mut acc = [0.0; MAX_COMPONENTS];
        for cell in cells {
            acc[..m].iter_mut().for_each(|v| *v = 0.0);
            for (&xi, &w) in xi_nodes.iter().zip(weights) {
                self.x_average(&g, cell, xi, &mut avg[..m]);
                for c in 0..m {
                    acc[c] += w * avg[c];
                }
            }
            out.extend_from_slice(&acc[..m]);
        }
        Some(out)
    }

    /// Fills the extended row of component `c`; `left`/`right` hold Dirichlet
    /// ghost states outward from the boundary.
    fn fill_row(
        &self,
        interior: impl Fn(usize) -> f64,
        c: usize,
        m: usize,
        left: Option<&[f64]>,
        right: Option<&[f64]>,
        ext: &mut [f64],
    ) {
        let nx = self.mesh.n_cells;
        let g = (ext.len() - nx) / 2;
        let periodic = self.boundary.is_periodic();
        for i in 0..nx {
            ext[g + i] = interior(i);
        }
        for s in 0..g {
            ext[g - 1 - s] = match left {
                Some(states) => states[s * m + c],
                None if periodic => interior((nx - 1 - s % nx) % nx),
                None => interior(0),
            };
            ext[g + nx + s] = match right {
                Some(states) => states[s * m + c],
                None if periodic => interior(s % nx),
                None => interior(nx - 1),
            };
        }
    }

    fn check_speed(&self, model: &dyn ConservationLaw, u: &[f64], xi: f64) -> Result<f64> {
        model.max_wavespeed(u, xi)
    }

    fn wenosg_traces(&self, field: &GpcField, j: usize, t: f64) -> Result<ElementTraces> {
        let m = field.n_components();
        let nx = self.mesh.n_cells;
        let n_faces = nx + 1;
        let g = ghost_width(self.config.reconstruction_degree);
        let model = self.model.as_ref();
        let xi_nodes = self.basis.element_nodes(j);
        let mut values = vec![0.0; xi_nodes.len() * n_faces * 2 * m];
        let mut cell_vals = vec![0.0; nx * m];
        let mut ext = vec![0.0; nx + 2 * g];
        let (mut minus, mut plus) = (vec![0.0; n_faces], vec![0.0; n_faces]);
        let mut max_speed = 0.0f64;
        for (rho, &xi) in xi_nodes.iter().enumerate() {
            for i in 0..nx {
                let state = &mut cell_vals[i * m..(i + 1) * m];
                self.basis.evaluate_at_node(field.block(i, j), m, rho, state);
                let speed = self
                    .check_speed(model, state, xi)
                    .map_err(|e| unrecoverable(i, j, rho, e.to_string()))?;
                max_speed = max_speed.max(speed);
            }
            let one = [1.0];
            let left = self.ghost_states(&self.boundary.left, t, (1..=g as isize).map(|s| -s), &[xi], &one, m);
            let right = self.ghost_states(
                &self.boundary.right,
                t,
                (0..g as isize).map(|s| nx as isize + s),
                &[xi],
                &one,
                m,
            );
            for c in 0..m {
                self.fill_row(|i| cell_vals[i * m + c], c, m, left.as_deref(), right.as_deref(), &mut ext);
                row_traces(&ext, g, self.mesh.dx(), self.config.reconstruction_degree, &mut minus, &mut plus);
                for f in 0..n_faces {
                    let base = (rho * n_faces + f) * 2 * m;
                    values[base + c] = minus[f];
                    values[base + m + c] = plus[f];
                }
            }
            for f in 0..n_faces {
                let base = (rho * n_faces + f) * 2 * m;
                for side in 0..2 {
                    let s = &values[base + side * m..base + (side + 1) * m];
                    let speed = self
                        .check_speed(model, s, xi)
                        .map_err(|e| unrecoverable(f.min(nx - 1), j, rho, format!("interface {f} trace: {e}")))?;
                    max_speed = max_speed.max(speed);
                }
            }
        }
        Ok(ElementTraces {
            values,
            max_speed,
            stats: LimiterStats::default(),
        })
    }

    /// Flux differences at the element nodes: `[(rho * n_faces + f) * m + c]`.
    fn node_fluxes(&self, traces: &[f64], j: usize, m: usize, c_visc: f64) -> Result<Vec<f64>> {
        let nx = self.mesh.n_cells;
        let n_faces = nx + 1;
        let model = self.model.as_ref();
        let xi_nodes = self.basis.element_nodes(j);
        let mut fluxes = vec![0.0; xi_nodes.len() * n_faces * m];
        for (rho, &xi) in xi_nodes.iter().enumerate() {
            for f in 0..n_faces {
                let base = (rho * n_faces + f) * 2 * m;
                let (um, up) = (&traces[base..base + m], &traces[base + m..base + 2 * m]);
                let out = &mut fluxes[(rho * n_faces + f) * m..(rho * n_faces + f + 1) * m];
                super::lax_friedrichs(model, um, up, xi, c_visc, out)
                    .map_err(|e| unrecoverable(f.min(nx - 1), j, rho, format!("interface {f} flux: {e}")))?;
            }
        }
        Ok(fluxes)
    }

    /// Adds the projection of the cell-averaged source of cell `i` onto the
    /// `n_modes` basis functions of element `j`, using a dense Gauss rule.
    fn add_source_projection(&self, t: f64, i: usize, j: usize, n_modes: usize, block: &mut [f64]) {
        let m = self.model.n_components();
        let model = self.model.as_ref();
        let (a, b) = self.basis.element(j);
        let (xc, dx) = (self.mesh.center(i as isize), self.mesh.dx());
        let mut buf = [0.0; MAX_COMPONENTS];
        let n_basis = self.basis.n_modes();
        for (q, (s, wq)) in self.source_rule.nodes.iter().zip(&self.source_rule.weights).enumerate() {
            let xi = 0.5 * (a + b) + 0.5 * (b - a) * s;
            let mut avg = [0.0; MAX_COMPONENTS];
            for (z, wz) in self.x_rule.nodes.iter().zip(&self.x_rule.weights) {
                if model.source(t, xc + z * dx, xi, &mut buf[..m]).is_some() {
                    for c in 0..m {
                        avg[c] += wz * buf[c];
                    }
                }
            }
            for k in 0..n_modes {
                let phi = self.source_phi[q * n_basis + k];
                for c in 0..m {
                    block[k * m + c] += wq * phi * avg[c];
                }
            }
        }
    }

    pub(super) fn rhs_wenosg(&self, field: &GpcField, t: f64) -> Result<(GpcField, f64)> {
        let ne = field.n_elements();
        let m = field.n_components();
        let nx = self.mesh.n_cells;
        let n_faces = nx + 1;
        let traces: Vec<ElementTraces> =
            (0..ne).into_par_iter().map(|j| self.wenosg_traces(field, j, t)).collect::<Result<_>>()?;
        let c_visc = traces.iter().fold(0.0f64, |c, tr| c.max(tr.max_speed));

        let mut out = GpcField::zeros(field.n_modes(), nx, ne, m);
        let block_len = out.block_len();
        let inv_dx = 1.0 / self.mesh.dx();
        let weights = self.basis.node_weights();
        let has_source = self.model.has_source();
        out.data_mut()
            .par_chunks_mut(nx * block_len)
            .enumerate()
            .try_for_each(|(j, slab)| -> Result<()> {
                let fluxes = self.node_fluxes(&traces[j].values, j, m, c_visc)?;
                for (i, block) in slab.chunks_mut(block_len).enumerate() {
                    for (rho, &w) in weights.iter().enumerate() {
                        let phi = self.basis.phi_at_node(rho);
                        let right = &fluxes[(rho * n_faces + i + 1) * m..(rho * n_faces + i + 2) * m];
                        let left = &fluxes[(rho * n_faces + i) * m..(rho * n_faces + i + 1) * m];
                        for (k, &p) in phi.iter().enumerate() {
                            for c in 0..m {
                                block[k * m + c] -= w * p * inv_dx * (right[c] - left[c]);
                            }
                        }
                    }
                    if has_source {
                        self.add_source_projection(t, i, j, self.basis.n_modes(), block);
                    }
                }
                Ok(())
            })?;
        Ok((out, c_visc))
    }

    /// Extended x-row of element `jj` for component `c` of a cell-mean field.
    fn means_row(&self, field: &CellMeanField, jj: usize, c: usize, t: f64, ext: &mut [f64]) {
        let m = field.n_components();
        let nx = self.mesh.n_cells;
        let g = (ext.len() - nx) / 2;
        let xi_nodes = self.basis.element_nodes(jj);
        let weights = self.basis.node_weights();
        let left = self.ghost_states(&self.boundary.left, t, (1..=g as isize).map(|s| -s), &xi_nodes, weights, m);
        let right =
            self.ghost_states(&self.boundary.right, t, (0..g as isize).map(|s| nx as isize + s), &xi_nodes, weights, m);
        self.fill_row(|i| field.get(i, jj, c), c, m, left.as_deref(), right.as_deref(), ext);
    }

    /// Reconstructions of cells `-1..=n_cells` of element `j`, component `c`.
    pub(super) fn element_polys(&self, field: &CellMeanField, j: usize, c: usize, t: f64) -> Vec<Poly2D> {
        let nx = self.mesh.n_cells;
        let ne = field.n_elements();
        let degree = self.config.reconstruction_degree;
        let g = ghost_width(degree);
        let rows: Vec<Vec<f64>> = [j.saturating_sub(1), j, (j + 1).min(ne - 1)]
            .iter()
            .map(|&jj| {
                let mut ext = vec![0.0; nx + 2 * g];
                self.means_row(field, jj, c, t, &mut ext);
                ext
            })
            .collect();
        (0..nx + 2)
            .map(|cell| {
                let e = cell + g - 1;
                if degree == 0 {
                    Poly2D::constant(rows[1][e])
                } else {
                    let mut st: Stencil2D = [[0.0; 3]; 3];
                    for (a, col) in st.iter_mut().enumerate() {
                        for (b, v) in col.iter_mut().enumerate() {
                            *v = rows[b][e + a - 1];
                        }
                    }
                    cwenoz_2d(&st, self.mesh.dx())
                }
            })
            .collect()
    }

    fn weno2d_traces(&self, field: &CellMeanField, j: usize, t: f64) -> Result<ElementTraces> {
        let m = field.n_components();
        let nx = self.mesh.n_cells;
        let n_faces = nx + 1;
        let model = self.model.as_ref();
        let xi_nodes = self.basis.element_nodes(j);
        let nodes = xi_nodes.len();
        let etas: Vec<f64> = self.basis.reference_nodes().iter().map(|s| 0.5 * s).collect();
        let polys: Vec<Vec<Poly2D>> = (0..m).map(|c| self.element_polys(field, j, c, t)).collect();

        // side values per extended cell: [(cell * 2 + side) * nodes + rho] * m + c
        let mut sides = vec![0.0; (nx + 2) * 2 * nodes * m];
        for cell in 0..nx + 2 {
            for (side, zeta) in [(0usize, -0.5), (1usize, 0.5)] {
                for (rho, &eta) in etas.iter().enumerate() {
                    for c in 0..m {
                        sides[((cell * 2 + side) * nodes + rho) * m + c] = polys[c][cell].eval_local(zeta, eta);
                    }
                }
            }
        }

        let mut stats = LimiterStats::default();
        if self.config.limiters.enable_hyperbolicity {
            let eps = self.config.limiters.admissibility_eps;
            let mut block = vec![0.0; self.basis.n_modes() * m];
            for cell in 0..nx + 2 {
                for side in 0..2 {
                    let start = (cell * 2 + side) * nodes * m;
                    let samples = &mut sides[start..start + nodes * m];
                    self.basis.project_into(samples, m, &mut block)?;
                    let theta = limiters::hyperbolicity_limit_in_place(&mut block, &self.basis, model, eps)
                        .map_err(|e| {
                            unrecoverable(cell.saturating_sub(1).min(nx - 1), j, 0, format!("trace remap: {e}"))
                        })?;
                    stats.record_theta(theta);
                    if theta > 0.0 {
                        for rho in 0..nodes {
                            self.basis.evaluate_at_node(&block, m, rho, &mut samples[rho * m..(rho + 1) * m]);
                        }
                    }
                }
            }
        }

        let mut max_speed = 0.0f64;
        for (rho, &xi) in xi_nodes.iter().enumerate() {
            for i in 0..nx {
                let speed = self
                    .check_speed(model, field.state(i, j), xi)
                    .map_err(|e| unrecoverable(i, j, rho, e.to_string()))?;
                max_speed = max_speed.max(speed);
            }
        }
        let mut values = vec![0.0; nodes * n_faces * 2 * m];
        for (rho, &xi) in xi_nodes.iter().enumerate() {
            for f in 0..n_faces {
                let base = (rho * n_faces + f) * 2 * m;
                // left cell of face f is extended cell f, right cell is f + 1
                let from_left = ((f * 2 + 1) * nodes + rho) * m;
                let from_right = (((f + 1) * 2) * nodes + rho) * m;
                values[base..base + m].copy_from_slice(&sides[from_left..from_left + m]);
                values[base + m..base + 2 * m].copy_from_slice(&sides[from_right..from_right + m]);
                for side in 0..2 {
                    let s = &values[base + side * m..base + (side + 1) * m];
                    let speed = self
                        .check_speed(model, s, xi)
                        .map_err(|e| unrecoverable(f.min(nx - 1), j, rho, format!("interface {f} trace: {e}")))?;
                    max_speed = max_speed.max(speed);
                }
            }
        }
        Ok(ElementTraces {
            values,
            max_speed,
            stats,
        })
    }

    pub(super) fn rhs_weno2d(&self, field: &CellMeanField, t: f64) -> Result<(CellMeanField, f64, LimiterStats)> {
        let ne = field.n_elements();
        let m = field.n_components();
        let nx = self.mesh.n_cells;
        let n_faces = nx + 1;
        let traces: Vec<ElementTraces> =
            (0..ne).into_par_iter().map(|j| self.weno2d_traces(field, j, t)).collect::<Result<_>>()?;
        let c_visc = traces.iter().fold(0.0f64, |c, tr| c.max(tr.max_speed));
        let mut stats = LimiterStats::default();
        for tr in &traces {
            stats.merge(&tr.stats);
        }

        let mut out = CellMeanField::zeros(nx, ne, m);
        let inv_dx = 1.0 / self.mesh.dx();
        let weights = self.basis.node_weights();
        let has_source = self.model.has_source();
        out.data_mut()
            .par_chunks_mut(nx * m)
            .enumerate()
            .try_for_each(|(j, slab)| -> Result<()> {
                let fluxes = self.node_fluxes(&traces[j].values, j, m, c_visc)?;
                for (i, state) in slab.chunks_mut(m).enumerate() {
                    for (rho, &w) in weights.iter().enumerate() {
                        let right = &fluxes[(rho * n_faces + i + 1) * m..(rho * n_faces + i + 2) * m];
                        let left = &fluxes[(rho * n_faces + i) * m..(rho * n_faces + i + 1) * m];
                        for c in 0..m {
                            state[c] -= w * inv_dx * (right[c] - left[c]);
                        }
                    }
                    if has_source {
                        self.add_source_projection(t, i, j, 1, state);
                    }
                }
                Ok(())
            })?;
        Ok((out, c_visc, stats))
    }
}
