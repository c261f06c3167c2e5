//! Compressible Euler equations for a dry atmosphere with conserved state
//! `[ρ, ρu, ρw, ρθ]`, closed by `P = C0 (ρθ)^γ`.

use crate::error::{Result, SolverError};
use crate::grid::{apply_bc, Axis, Field, GhostFill, Grid, N_GHOST};
use crate::physics::Model;
use crate::weno::{reconstruct_field, CellPoly, PolyField, WenoParams};

pub const RHO: usize = 0;
pub const RHO_U: usize = 1;
pub const RHO_W: usize = 2;
pub const RHO_THETA: usize = 3;

/// Thermodynamic constants of dry air.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub g: f64,
    pub p0: f64,
    pub r_d: f64,
    pub c_p: f64,
    pub c_v: f64,
    pub gamma: f64,
    pub c0: f64,
}

impl Constants {
    pub fn dry_air() -> Self {
        let (r_d, c_p, c_v, p0) = (287.0, 1004.0, 717.0, 1e5);
        // c_p - c_v = R_d holds exactly for these values; γ is kept as their
        // ratio so that P0 = C0 (P0/R_d)^γ and the Exner identities are exact.
        let gamma = c_p / c_v;
        Constants {
            g: 9.81,
            p0,
            r_d,
            c_p,
            c_v,
            gamma,
            c0: r_d.powf(gamma) / p0.powf(r_d / c_v),
        }
    }

    #[inline]
    fn pressure_unchecked(&self, rho_theta: f64) -> f64 {
        self.c0 * rho_theta.powf(self.gamma)
    }

    /// Exner pressure directly from `ρθ`: `(R_d ρθ / P0)^(R_d/c_v)`.
    #[inline]
    pub fn exner_from_rho_theta(&self, rho_theta: f64) -> f64 {
        (self.r_d * rho_theta / self.p0).powf(self.r_d / self.c_v)
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(SolverError::state(-1, -1, format!("{name} must be positive and finite, got {v}")))
    }
}

pub fn eos_pressure(c: &Constants, rho_theta: f64) -> Result<f64> {
    Ok(c.pressure_unchecked(positive("rho_theta", rho_theta)?))
}

/// `√(γ P / ρ)`, the derivative of pressure with respect to density at fixed θ.
pub fn sound_speed(c: &Constants, rho: f64, rho_theta: f64) -> Result<f64> {
    let rho = positive("rho", rho)?;
    Ok((c.gamma * eos_pressure(c, rho_theta)? / rho).sqrt())
}

pub fn euler_flux_x(c: &Constants, q: &[f64; 4]) -> Result<[f64; 4]> {
    positive("rho", q[RHO])?;
    positive("rho_theta", q[RHO_THETA])?;
    Ok(flux_unchecked(c, Axis::X, q))
}

pub fn euler_flux_z(c: &Constants, q: &[f64; 4]) -> Result<[f64; 4]> {
    positive("rho", q[RHO])?;
    positive("rho_theta", q[RHO_THETA])?;
    Ok(flux_unchecked(c, Axis::Z, q))
}

#[inline]
fn flux_unchecked(c: &Constants, axis: Axis, q: &[f64; 4]) -> [f64; 4] {
    let p = c.pressure_unchecked(q[RHO_THETA]);
    match axis {
        Axis::X => {
            let u = q[RHO_U] / q[RHO];
            [q[RHO_U], q[RHO_U] * u + p, q[RHO_W] * u, q[RHO_THETA] * u]
        }
        Axis::Z => {
            let w = q[RHO_W] / q[RHO];
            [q[RHO_W], q[RHO_U] * w, q[RHO_W] * w + p, q[RHO_THETA] * w]
        }
    }
}

pub fn exner(c: &Constants, p: f64) -> Result<f64> {
    Ok((positive("pressure", p)? / c.p0).powf(c.r_d / c.c_p))
}

/// Specific total energy `c_v θ π + ½(u² + w²) + g z` in J/kg.
pub fn total_energy(c: &Constants, q: &[f64; 4], z: f64) -> Result<f64> {
    positive("rho", q[RHO])?;
    positive("rho_theta", q[RHO_THETA])?;
    Ok(energy_unchecked(c, q, z))
}

#[inline]
fn energy_unchecked(c: &Constants, q: &[f64; 4], z: f64) -> f64 {
    let theta = q[RHO_THETA] / q[RHO];
    let u = q[RHO_U] / q[RHO];
    let w = q[RHO_W] / q[RHO];
    c.c_v * theta * c.exner_from_rho_theta(q[RHO_THETA]) + 0.5 * (u * u + w * w) + c.g * z
}

/// Per-unit-volume split of `ρe` into internal, kinetic and potential parts.
pub fn energy_densities(c: &Constants, q: &[f64; 4], z: f64) -> Result<[f64; 3]> {
    let rho = positive("rho", q[RHO])?;
    let rho_theta = positive("rho_theta", q[RHO_THETA])?;
    let internal = c.c_v * rho_theta * c.exner_from_rho_theta(rho_theta);
    let kinetic = 0.5 * (q[RHO_U] * q[RHO_U] + q[RHO_W] * q[RHO_W]) / rho;
    Ok([internal, kinetic, rho * c.g * z])
}

pub fn gravity_source(c: &Constants, q: &[f64; 4]) -> [f64; 4] {
    [0.0, 0.0, -q[RHO] * c.g, 0.0]
}

/// `ρ K ∇²` of the primitive velocity components and θ, averaged over the
/// cell with the 2x2 Gauss rule. `prim` holds the reconstructions of
/// `[ρ, u, w, θ]`.
pub fn viscous_source(prim: &[CellPoly; 4], k: f64, dx: f64, dz: f64) -> [f64; 4] {
    if k == 0.0 {
        return [0.0; 4];
    }
    let lap = |p: &CellPoly| {
        let (dxx, dzz) = p.second_derivs(dx, dz);
        dxx + dzz
    };
    let (lu, lw, lt) = (lap(&prim[1]), lap(&prim[2]), lap(&prim[3]));
    let g = 0.5 / 3f64.sqrt();
    let rho_sum = (prim[0].eval(-g, -g) + prim[0].eval(g, -g)) + (prim[0].eval(-g, g) + prim[0].eval(g, g));
    let rho_k = 0.25 * rho_sum * k;
    [0.0, rho_k * lu, rho_k * lw, rho_k * lt]
}

/// Horizontally uniform reference state stored per padded row.
#[derive(Debug, Clone, PartialEq)]
pub struct Background {
    rows: Vec<[f64; 4]>,
}

impl Background {
    /// `rows[k]` is the state of padded row `k - N_GHOST`.
    pub fn from_rows(rows: Vec<[f64; 4]>) -> Self {
        Background { rows }
    }

    pub fn row(&self, j: isize) -> Option<[f64; 4]> {
        let k = j + N_GHOST as isize;
        (k >= 0).then(|| self.rows.get(k as usize).copied()).flatten()
    }
}

#[derive(Debug, Clone)]
pub struct EulerModel {
    pub consts: Constants,
    /// Kinematic viscosity K (m²/s); zero for the inviscid equations.
    pub viscosity: f64,
    pub background: Option<Background>,
}

impl EulerModel {
    pub fn new(consts: Constants) -> Self {
        EulerModel { consts, viscosity: 0.0, background: None }
    }

    pub fn with_viscosity(mut self, k: f64) -> Self {
        self.viscosity = k;
        self
    }

    pub fn with_background(mut self, bg: Background) -> Self {
        self.background = Some(bg);
        self
    }
}

impl GhostFill<4> for EulerModel {
    #[inline]
    fn reflect(&self, q: &[f64; 4], axis: Axis) -> [f64; 4] {
        match axis {
            Axis::X => [q[0], -q[1], q[2], q[3]],
            Axis::Z => [q[0], q[1], -q[2], q[3]],
        }
    }

    fn background_row(&self, j: isize) -> Option<[f64; 4]> {
        self.background.as_ref().and_then(|b| b.row(j))
    }
}

impl Model<4> for EulerModel {
    #[inline]
    fn flux(&self, axis: Axis, q: &[f64; 4], _x: f64, _z: f64, _t: f64) -> [f64; 4] {
        flux_unchecked(&self.consts, axis, q)
    }

    #[inline]
    fn limiter_quantity(&self, q: &[f64; 4], _x: f64, z: f64) -> f64 {
        energy_unchecked(&self.consts, q, z)
    }

    fn max_speeds(&self, field: &Field<4>, _grid: &Grid, _t: f64) -> Result<(f64, f64)> {
        let mut sx: f64 = 0.0;
        let mut sz: f64 = 0.0;
        for (i, j, q) in field.interior() {
            if let Some(reason) = self.invalid_state(q) {
                return Err(SolverError::state(i as isize, j as isize, reason));
            }
            let cs = (self.consts.gamma * self.consts.pressure_unchecked(q[RHO_THETA]) / q[RHO]).sqrt();
            let (u, w) = (q[RHO_U] / q[RHO], q[RHO_W] / q[RHO]);
            sx = sx.max(u.abs() + cs);
            sz = sz.max(w.abs() + cs);
        }
        Ok((sx, sz))
    }

    fn invalid_state(&self, q: &[f64; 4]) -> Option<&'static str> {
        if q.iter().any(|v| !v.is_finite()) {
            Some("non-finite state")
        } else if q[RHO] <= 0.0 {
            Some("non-positive density")
        } else if q[RHO_THETA] <= 0.0 {
            Some("non-positive rho*theta")
        } else {
            None
        }
    }

    fn has_source(&self) -> bool {
        true
    }

    fn source_rate(&self, field: &mut Field<4>, grid: &Grid, weno: &WenoParams, out: &mut Field<4>) -> Result<()> {
        let g = self.consts.g;
        for j in 0..grid.nz as isize {
            for i in 0..grid.nx as isize {
                *out.get_mut(i, j) = [0.0, 0.0, -field.get(i, j)[RHO] * g, 0.0];
            }
        }
        if self.viscosity == 0.0 {
            return Ok(());
        }
        apply_bc(field, grid, self);
        let mut prim = field.clone();
        for q in prim.raw_mut() {
            let rho = q[RHO];
            *q = [rho, q[RHO_U] / rho, q[RHO_W] / rho, q[RHO_THETA] / rho];
        }
        let mut polys = PolyField::new(grid);
        reconstruct_field(&prim, grid, weno, &mut polys)?;
        for j in 0..grid.nz as isize {
            for i in 0..grid.nx as isize {
                let v = viscous_source(polys.get(i, j), self.viscosity, grid.dx, grid.dz);
                let s = out.get_mut(i, j);
                for k in 1..4 {
                    s[k] += v[k];
                }
            }
        }
        Ok(())
    }
}

/// Primitive view `[ρ, u, w, θ]` of a reconstructed conserved state.
pub fn primitives(q: &[f64; 4]) -> [f64; 4] {
    [q[RHO], q[RHO_U] / q[RHO], q[RHO_W] / q[RHO], q[RHO_THETA] / q[RHO]]
}
