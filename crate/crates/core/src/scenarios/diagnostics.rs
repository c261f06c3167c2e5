//! Error norms, convergence orders, energy budgets and extrema.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SolverError};
use crate::grid::{Field, Grid};
use crate::physics::euler::{energy_densities, Background, Constants, RHO, RHO_THETA, RHO_U, RHO_W};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorNorms {
    pub linf: f64,
    /// `Σ |dev| Δx Δz`.
    pub l1: f64,
}

impl ErrorNorms {
    /// L1 divided by the domain area.
    pub fn l1_mean(&self, grid: &Grid) -> f64 {
        self.l1 / ((grid.x_max - grid.x_min) * (grid.z_max - grid.z_min))
    }
}

pub fn error_norms(field: &Field<1>, exact: &Field<1>, grid: &Grid) -> ErrorNorms {
    let mut linf: f64 = 0.0;
    let mut l1 = 0.0;
    for ((_, _, q), (_, _, e)) in field.interior().zip(exact.interior()) {
        let d = (q[0] - e[0]).abs();
        linf = linf.max(d);
        l1 += d;
    }
    ErrorNorms { linf, l1: l1 * grid.cell_area() }
}

/// `log2(e_coarse / e_fine)`; NaN unless both errors are positive.
pub fn convergence_order(e_coarse: f64, e_fine: f64) -> f64 {
    if e_coarse > 0.0 && e_fine > 0.0 {
        (e_coarse / e_fine).log2()
    } else {
        f64::NAN
    }
}

/// Domain integrals of `ρe` split into its three parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyTotals {
    pub internal: f64,
    pub kinetic: f64,
    pub potential: f64,
}

impl EnergyTotals {
    pub fn total(&self) -> f64 {
        self.internal + self.kinetic + self.potential
    }

    /// Every part divided by `reference`, usually the initial total.
    pub fn normalized(&self, reference: f64) -> EnergyTotals {
        EnergyTotals {
            internal: self.internal / reference,
            kinetic: self.kinetic / reference,
            potential: self.potential / reference,
        }
    }
}

pub fn energy_totals(c: &Constants, field: &Field<4>, grid: &Grid) -> Result<EnergyTotals> {
    let mut sums = [0.0; 3];
    for j in 0..grid.nz as isize {
        let z = grid.z_center(j);
        let mut row = [0.0; 3];
        for i in 0..grid.nx as isize {
            let e = energy_densities(c, field.get(i, j), z).map_err(|err| at_cell(err, i, j))?;
            for k in 0..3 {
                row[k] += e[k];
            }
        }
        for k in 0..3 {
            sums[k] += row[k];
        }
    }
    let a = grid.cell_area();
    Ok(EnergyTotals { internal: sums[0] * a, kinetic: sums[1] * a, potential: sums[2] * a })
}

fn at_cell(err: SolverError, i: isize, j: isize) -> SolverError {
    match err {
        SolverError::InvalidState { reason, .. } => SolverError::InvalidState { i, j, reason },
        other => other,
    }
}

/// `θ - θ̄` of a cell, with `θ̄` the background row ratio `ρθ / ρ`.
pub fn theta_prime(q: &[f64; 4], background: &Background, j: isize) -> f64 {
    let bg = background.row(j).expect("background covers every interior row");
    q[RHO_THETA] / q[RHO] - bg[RHO_THETA] / bg[RHO]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

impl Range {
    fn empty() -> Self {
        Range { min: f64::INFINITY, max: f64::NEG_INFINITY }
    }

    fn push(&mut self, v: f64) {
        self.min = self.min.min(v);
        self.max = self.max.max(v);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extrema {
    pub theta_prime: Range,
    pub u: Range,
    pub w: Range,
}

pub fn field_extrema(field: &Field<4>, background: &Background) -> Extrema {
    let mut ex = Extrema { theta_prime: Range::empty(), u: Range::empty(), w: Range::empty() };
    for (_, j, q) in field.interior() {
        ex.theta_prime.push(theta_prime(q, background, j as isize));
        ex.u.push(q[RHO_U] / q[RHO]);
        ex.w.push(q[RHO_W] / q[RHO]);
    }
    ex
}

/// Largest x in the lowest row where `θ' <= -1 K`, interpolated linearly
/// between cell centres; 0 when no cell is that cold.
pub fn front_location(field: &Field<4>, grid: &Grid, background: &Background) -> f64 {
    const THRESHOLD: f64 = -1.0;
    let tp: Vec<f64> = (0..grid.nx as isize).map(|i| theta_prime(field.get(i, 0), background, 0)).collect();
    let Some(last) = tp.iter().rposition(|v| *v <= THRESHOLD) else {
        return 0.0;
    };
    let x = grid.x_center(last as isize);
    if last + 1 == tp.len() {
        return x;
    }
    let (a, b) = (tp[last], tp[last + 1]);
    x + (THRESHOLD - a) / (b - a) * grid.dx
}

/// Largest relative deviation from mirror symmetry about the vertical line
/// `x = axis`, which must fall on a cell centre or face. Components listed in
/// `odd` change sign under the reflection. Each component is measured
/// against its own largest magnitude.
pub fn mirror_asymmetry<const N: usize>(field: &Field<N>, grid: &Grid, axis: f64, odd: &[usize]) -> Result<f64> {
    let s = 2.0 * (axis - grid.x_min) / grid.dx;
    let k = s.round();
    if (s - k).abs() > 1e-9 {
        return Err(SolverError::InvalidConfig(format!("mirror axis x = {axis} is not on a cell centre or face")));
    }
    let nx = grid.nx as isize;
    let k = k as isize;
    let mut worst: f64 = 0.0;
    for comp in 0..N {
        let sign = if odd.contains(&comp) { -1.0 } else { 1.0 };
        let mut scale: f64 = 0.0;
        let mut dev: f64 = 0.0;
        for j in 0..grid.nz as isize {
            for i in 0..nx {
                let m = (k - 1 - i).rem_euclid(nx);
                let a = field.get(i, j)[comp];
                let b = field.get(m, j)[comp];
                scale = scale.max(a.abs());
                dev = dev.max((a - sign * b).abs());
            }
        }
        if scale > 0.0 {
            worst = worst.max(dev / scale);
        }
    }
    Ok(worst)
}

/// Values along the vertical line `x = x0`, as `(z, value)` pairs. On a face
/// the two neighbouring columns are averaged.
pub fn cross_section(field: &Field<1>, grid: &Grid, x0: f64) -> Vec<(f64, f64)> {
    let s = (x0 - grid.x_min) / grid.dx;
    let on_face = (s - s.round()).abs() < 1e-9;
    (0..grid.nz as isize)
        .map(|j| {
            let v = if on_face {
                let i = s.round() as isize;
                let lo = (i - 1).clamp(0, grid.nx as isize - 1);
                let hi = i.clamp(0, grid.nx as isize - 1);
                0.5 * (field.get(lo, j)[0] + field.get(hi, j)[0])
            } else {
                field.get((s.floor() as isize).clamp(0, grid.nx as isize - 1), j)[0]
            };
            (grid.z_center(j), v)
        })
        .collect()
}
