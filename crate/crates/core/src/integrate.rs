//! Semi-discrete operator assembly, CFL step control, TVD-RK3 stepping and
//! Strang splitting of the source terms.

use rayon::prelude::*;

use crate::error::{Result, SolverError};
use crate::flux::{face_limiter, flic_with_psi, FacePair, FluxConfig};
use crate::grid::{apply_bc, Axis, BcKind, Field, Grid, N_GHOST};
use crate::physics::Model;
use crate::weno::{eval_poly, reconstruct_field, CellPoly, PolyField};

/// Local coordinate of the two-point Gauss rule on `[-1/2, 1/2]`.
pub const GAUSS_POINT: f64 = 0.288_675_134_594_812_9;

/// `CFL · min(Δx / max s_x, Δz / max s_z)`, capped at `dt_max` (which is
/// also the answer when nothing moves).
pub fn compute_dt<const N: usize, M: Model<N>>(
    field: &Field<N>,
    grid: &Grid,
    cfg: &FluxConfig,
    model: &M,
    t: f64,
    dt_max: f64,
) -> Result<f64> {
    let (sx, sz) = model.max_speeds(field, grid, t)?;
    let mut dt = dt_max;
    if sx > 0.0 {
        dt = dt.min(cfg.cfl * grid.dx / sx);
    }
    if sz > 0.0 {
        dt = dt.min(cfg.cfl * grid.dz / sz);
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(SolverError::InvalidConfig(format!(
            "no finite time step: speeds ({sx}, {sz}) and dt_max {dt_max}"
        )));
    }
    Ok(dt)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Wall {
    None,
    /// Wall on the low side of the face; the interior state is on the right.
    Low,
    High,
}

fn wall_at(face: isize, n: usize, bcs: (BcKind, BcKind)) -> Wall {
    if face == 0 && bcs.0 == BcKind::SolidWall {
        Wall::Low
    } else if face == n as isize && bcs.1 == BcKind::SolidWall {
        Wall::High
    } else {
        Wall::None
    }
}

/// Jump of the limiter quantity across a face, evaluated at its midpoint,
/// and a magnitude for the zero-jump test. Reflecting walls have no jump.
#[inline]
fn face_jump<const N: usize, M: Model<N>>(
    model: &M,
    axis: Axis,
    pl: &[CellPoly; N],
    pr: &[CellPoly; N],
    wall: Wall,
    x: f64,
    z: f64,
) -> (f64, f64) {
    if wall != Wall::None {
        return (0.0, 0.0);
    }
    let (ql, qr) = match axis {
        Axis::X => (eval_poly(pl, 0.5, 0.0), eval_poly(pr, -0.5, 0.0)),
        Axis::Z => (eval_poly(pl, 0.0, 0.5), eval_poly(pr, 0.0, -0.5)),
    };
    let el = model.limiter_quantity(&ql, x, z);
    let er = model.limiter_quantity(&qr, x, z);
    (er - el, el.abs().max(er.abs()))
}

/// Face-averaged FLIC flux from the two-point Gauss rule along the face.
/// `(x, z)` is the face midpoint.
#[allow(clippy::too_many_arguments)]
#[inline(always)]
fn face_flux<const N: usize, M: Model<N>>(
    model: &M,
    axis: Axis,
    pl: &[CellPoly; N],
    pr: &[CellPoly; N],
    wall: Wall,
    psi: f64,
    x: f64,
    z: f64,
    t: f64,
    dt: f64,
    grid: &Grid,
    omega: f64,
) -> [f64; N] {
    let dcell = grid.spacing(axis);
    let mut g = [[0.0; N]; 2];
    for (gk, s) in g.iter_mut().zip([-GAUSS_POINT, GAUSS_POINT]) {
        let (ql, qr, px, pz) = match axis {
            Axis::X => (eval_poly(pl, 0.5, s), eval_poly(pr, -0.5, s), x, z + s * grid.dz),
            Axis::Z => (eval_poly(pl, s, 0.5), eval_poly(pr, s, -0.5), x + s * grid.dx, z),
        };
        let (ql, qr) = match wall {
            Wall::None => (ql, qr),
            Wall::Low => (model.reflect(&qr, axis), qr),
            Wall::High => (ql, model.reflect(&ql, axis)),
        };
        let f = model.point_flux(axis, px, pz, t);
        let fp = FacePair::new(ql, qr, &f);
        *gk = flic_with_psi(&fp, dt, dcell, omega, psi, &f);
    }
    let [lo, hi] = g;
    let mut out = [0.0; N];
    for k in 0..N {
        out[k] = 0.5 * (lo[k] + hi[k]);
    }
    out
}

/// Evaluates `L(Q) = −ΔF/Δx − ΔH/Δz` on interior cells of `out`.
///
/// Ghost cells of `field` must be filled. `dt` is the marching step that
/// enters the centred fluxes; `t` is the evaluation time of the fluxes.
#[allow(clippy::too_many_arguments)]
pub fn spatial_operator<const N: usize, M: Model<N>>(
    field: &Field<N>,
    grid: &Grid,
    cfg: &FluxConfig,
    model: &M,
    t: f64,
    dt: f64,
    polys: &mut PolyField<N>,
    out: &mut Field<N>,
) -> Result<()> {
    reconstruct_field(field, grid, &cfg.weno, polys)?;
    let polys = &*polys;
    let (nx, nz) = (grid.nx, grid.nz);
    let g = N_GHOST as isize;
    let stride = out.stride();
    let bx = grid.bcs(Axis::X);
    let bz = grid.bcs(Axis::Z);

    // x-direction, one row at a time.
    out.raw_mut().par_chunks_mut(stride).enumerate().for_each(|(row, cells)| {
        let j = row as isize - g;
        if j < 0 || j >= nz as isize {
            return;
        }
        let zc = grid.z_center(j);
        // jumps[f + 1] for faces f = -1 ..= nx + 1 (face f sits left of cell f).
        let jumps: Vec<(f64, f64)> = (-1..=nx as isize + 1)
            .map(|f| {
                face_jump(model, Axis::X, polys.get(f - 1, j), polys.get(f, j), wall_at(f, nx, bx), grid.x_face(f), zc)
            })
            .collect();
        let fluxes: Vec<[f64; N]> = (0..=nx as isize)
            .map(|f| {
                let k = f as usize + 1;
                let psi = face_limiter([jumps[k - 1].0, jumps[k].0, jumps[k + 1].0], jumps[k].1, cfg.cfl, cfg.limiter);
                face_flux(
                    model,
                    Axis::X,
                    polys.get(f - 1, j),
                    polys.get(f, j),
                    wall_at(f, nx, bx),
                    psi,
                    grid.x_face(f),
                    zc,
                    t,
                    dt,
                    grid,
                    cfg.omega,
                )
            })
            .collect();
        for i in 0..nx {
            let cell = &mut cells[i + N_GHOST];
            for k in 0..N {
                cell[k] = -(fluxes[i + 1][k] - fluxes[i][k]) / grid.dx;
            }
        }
    });

    // z-direction: jumps on face rows -1 ..= nz + 1, then fluxes on 0 ..= nz.
    let mut jumps = vec![(0.0, 0.0); (nz + 3) * nx];
    jumps.par_chunks_mut(nx).enumerate().for_each(|(r, row)| {
        let f = r as isize - 1;
        let wall = wall_at(f, nz, bz);
        let zf = grid.z_face(f);
        for (i, jump) in row.iter_mut().enumerate() {
            let i = i as isize;
            *jump = face_jump(model, Axis::Z, polys.get(i, f - 1), polys.get(i, f), wall, grid.x_center(i), zf);
        }
    });
    let mut hflux = vec![[0.0; N]; (nz + 1) * nx];
    hflux.par_chunks_mut(nx).enumerate().for_each(|(r, row)| {
        let f = r as isize;
        let wall = wall_at(f, nz, bz);
        let zf = grid.z_face(f);
        let below = &jumps[r * nx..(r + 1) * nx];
        let at = &jumps[(r + 1) * nx..(r + 2) * nx];
        let above = &jumps[(r + 2) * nx..(r + 3) * nx];
        for (i, h) in row.iter_mut().enumerate() {
            let psi = face_limiter([below[i].0, at[i].0, above[i].0], at[i].1, cfg.cfl, cfg.limiter);
            let i = i as isize;
            *h = face_flux(
                model,
                Axis::Z,
                polys.get(i, f - 1),
                polys.get(i, f),
                wall,
                psi,
                grid.x_center(i),
                zf,
                t,
                dt,
                grid,
                cfg.omega,
            );
        }
    });
    out.raw_mut().par_chunks_mut(stride).enumerate().for_each(|(row, cells)| {
        let j = row as isize - g;
        if j < 0 || j >= nz as isize {
            return;
        }
        let (lo, hi) = (j as usize * nx, (j as usize + 1) * nx);
        for i in 0..nx {
            let cell = &mut cells[i + N_GHOST];
            for k in 0..N {
                cell[k] += -(hflux[hi + i][k] - hflux[lo + i][k]) / grid.dz;
            }
        }
    });
    Ok(())
}

/// Third-order TVD Runge-Kutta step of `dQ/dt = op(Q, t)`.
///
/// `op(stage, time, rhs)` writes the right-hand side for the interior cells
/// of `stage` into `rhs`; it is responsible for refreshing ghost cells.
/// Stage times are `t`, `t + dt` and `t + dt/2`.
pub fn rk3_step<const N: usize>(
    field: &mut Field<N>,
    t: f64,
    dt: f64,
    mut op: impl FnMut(&mut Field<N>, f64, &mut Field<N>) -> Result<()>,
) -> Result<()> {
    let q0 = field.clone();
    let mut rhs = field.clone();
    op(field, t, &mut rhs)?;
    field.combine(1.0, &q0, 0.0, &rhs, dt);
    op(field, t + dt, &mut rhs)?;
    field.combine(0.25, &q0, 0.75, &rhs, 0.25 * dt);
    op(field, t + 0.5 * dt, &mut rhs)?;
    field.combine(2.0 / 3.0, &q0, 1.0 / 3.0, &rhs, 2.0 / 3.0 * dt);
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo {
    pub step: usize,
    pub t: f64,
    pub dt: f64,
}

/// Owns the scratch space of one simulation and advances a field in time.
pub struct Solver<M, const N: usize> {
    pub grid: Grid,
    pub model: M,
    pub cfg: FluxConfig,
    /// Upper bound on the step, used as is when no wave moves.
    pub dt_max: f64,
    polys: PolyField<N>,
}

impl<const N: usize, M: Model<N>> Solver<M, N> {
    pub fn new(grid: Grid, model: M, cfg: FluxConfig) -> Result<Self> {
        cfg.validate()?;
        let polys = PolyField::new(&grid);
        Ok(Solver { grid, model, cfg, dt_max: f64::INFINITY, polys })
    }

    pub fn compute_dt(&self, field: &Field<N>, t: f64) -> Result<f64> {
        compute_dt(field, &self.grid, &self.cfg, &self.model, t, self.dt_max)
    }

    /// Fills ghosts of `field` and writes `L(Q)` into `out`.
    pub fn operator(&mut self, field: &mut Field<N>, t: f64, dt: f64, out: &mut Field<N>) -> Result<()> {
        apply_bc(field, &self.grid, &self.model);
        spatial_operator(field, &self.grid, &self.cfg, &self.model, t, dt, &mut self.polys, out)
    }

    /// Advances the homogeneous conservation law by `dt`.
    pub fn conservation_step(&mut self, field: &mut Field<N>, t: f64, dt: f64) -> Result<()> {
        let Solver { grid, model, cfg, polys, .. } = self;
        rk3_step(field, t, dt, |q, ts, rhs| {
            apply_bc(q, grid, &*model);
            spatial_operator(q, grid, cfg, &*model, ts, dt, polys, rhs)
        })
    }

    /// Advances `dQ/dt = S(Q)` by `dt` with the same Runge-Kutta scheme.
    pub fn source_step(&mut self, field: &mut Field<N>, t: f64, dt: f64) -> Result<()> {
        if !self.model.has_source() {
            return Ok(());
        }
        let Solver { grid, model, cfg, .. } = self;
        rk3_step(field, t, dt, |q, _, rhs| model.source_rate(q, grid, &cfg.weno, rhs))
    }

    /// `S(dt/2) L(dt) S(dt/2)`; reduces to `L(dt)` without source terms.
    pub fn strang_step(&mut self, field: &mut Field<N>, t: f64, dt: f64) -> Result<()> {
        if !self.model.has_source() {
            return self.conservation_step(field, t, dt);
        }
        self.source_step(field, t, 0.5 * dt)?;
        self.conservation_step(field, t, dt)?;
        self.source_step(field, t + 0.5 * dt, 0.5 * dt)
    }

    pub fn check_state(&self, field: &Field<N>) -> Result<()> {
        for (i, j, q) in field.interior() {
            if let Some(reason) = self.model.invalid_state(q) {
                return Err(SolverError::state(i as isize, j as isize, reason));
            }
        }
        Ok(())
    }

    /// Steps from `t0` to `t_end`, landing exactly on every time in `stops`
    /// that lies inside the interval. `observer` runs after every step.
    pub fn advance(
        &mut self,
        field: &mut Field<N>,
        t0: f64,
        t_end: f64,
        stops: &[f64],
        mut observer: impl FnMut(&StepInfo, &Field<N>) -> Result<()>,
    ) -> Result<StepInfo> {
        let tiny = 1e-12 * t_end.abs().max(1.0);
        let mut targets: Vec<f64> = stops.iter().copied().filter(|s| *s > t0 + tiny && *s < t_end - tiny).collect();
        targets.push(t_end);
        targets.sort_by(f64::total_cmp);
        let mut info = StepInfo { step: 0, t: t0, dt: 0.0 };
        for target in targets {
            while info.t < target - tiny {
                let mut dt = self.compute_dt(field, info.t)?;
                let landing = info.t + dt >= target - tiny;
                if landing {
                    dt = target - info.t;
                }
                self.strang_step(field, info.t, dt)?;
                self.check_state(field)?;
                info.step += 1;
                info.dt = dt;
                info.t = if landing { target } else { info.t + dt };
                observer(&info, field)?;
            }
        }
        Ok(info)
    }
}
