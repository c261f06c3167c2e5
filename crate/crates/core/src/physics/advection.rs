use std::f64::consts::PI;

use crate::error::Result;
use crate::grid::{Axis, Field, GhostFill, Grid};
use crate::physics::Model;

/// Prescribed velocity `(a, b)` of the scalar advection equation
/// `∂t Q + ∂x(a Q) + ∂z(b Q) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VelocityField {
    Constant { a: f64, b: f64 },
    /// Deformational flow on the unit square reversing at `period / 2`.
    Swirl { period: f64 },
    /// Steady circular vortex with tangential speed `vbar sech²(r) tanh(r)`.
    Doswell { vbar: f64 },
}

/// Angular speed `v(r)/r` of the Doswell vortex. The singularity at the origin
/// is removable with limit `vbar`.
pub fn doswell_angular_speed(vbar: f64, r: f64) -> f64 {
    if r < 1e-8 {
        vbar
    } else {
        let sech = 1.0 / r.cosh();
        vbar * sech * sech * r.tanh() / r
    }
}

impl VelocityField {
    pub fn velocity(&self, x: f64, z: f64, t: f64) -> (f64, f64) {
        match *self {
            VelocityField::Constant { a, b } => (a, b),
            VelocityField::Swirl { period } => {
                let g = (PI * t / period).cos();
                let (sx, sz) = ((PI * x).sin(), (PI * z).sin());
                (sx * sx * (2.0 * PI * z).sin() * g, -sz * sz * (2.0 * PI * x).sin() * g)
            }
            VelocityField::Doswell { vbar } => {
                let f = doswell_angular_speed(vbar, x.hypot(z));
                (-z * f, x * f)
            }
        }
    }

    /// The component of the velocity normal to `axis`.
    pub fn component(&self, axis: Axis, x: f64, z: f64, t: f64) -> f64 {
        match (*self, axis) {
            (VelocityField::Swirl { period }, Axis::X) => {
                let sx = (PI * x).sin();
                sx * sx * (2.0 * PI * z).sin() * (PI * t / period).cos()
            }
            (VelocityField::Swirl { period }, Axis::Z) => {
                let sz = (PI * z).sin();
                -sz * sz * (2.0 * PI * x).sin() * (PI * t / period).cos()
            }
            (_, Axis::X) => self.velocity(x, z, t).0,
            (_, Axis::Z) => self.velocity(x, z, t).1,
        }
    }

    /// Bound on `(|a|, |b|)` at `(x, z)` over the whole run. For the swirl the
    /// reversal factor is replaced by its maximum modulus, so the step stays
    /// finite when the flow momentarily stops.
    pub fn speed_bound(&self, x: f64, z: f64) -> (f64, f64) {
        match *self {
            VelocityField::Swirl { .. } => {
                let (sx, sz) = ((PI * x).sin(), (PI * z).sin());
                ((sx * sx * (2.0 * PI * z).sin()).abs(), (sz * sz * (2.0 * PI * x).sin()).abs())
            }
            _ => {
                let (a, b) = self.velocity(x, z, 0.0);
                (a.abs(), b.abs())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdvectionModel {
    pub velocity: VelocityField,
}

impl AdvectionModel {
    pub fn new(velocity: VelocityField) -> Self {
        AdvectionModel { velocity }
    }
}

/// `a(x, z, t) q`.
pub fn advection_flux_x(vel: &VelocityField, q: f64, x: f64, z: f64, t: f64) -> f64 {
    vel.velocity(x, z, t).0 * q
}

/// `b(x, z, t) q`.
pub fn advection_flux_z(vel: &VelocityField, q: f64, x: f64, z: f64, t: f64) -> f64 {
    vel.velocity(x, z, t).1 * q
}

impl GhostFill<1> for AdvectionModel {
    fn reflect(&self, q: &[f64; 1], _axis: Axis) -> [f64; 1] {
        *q
    }
}

impl Model<1> for AdvectionModel {
    #[inline]
    fn flux(&self, axis: Axis, q: &[f64; 1], x: f64, z: f64, t: f64) -> [f64; 1] {
        [self.velocity.component(axis, x, z, t) * q[0]]
    }

    fn point_flux(&self, axis: Axis, x: f64, z: f64, t: f64) -> impl Fn(&[f64; 1]) -> [f64; 1] + '_ {
        let v = self.velocity.component(axis, x, z, t);
        move |q| [v * q[0]]
    }

    #[inline]
    fn limiter_quantity(&self, q: &[f64; 1], _x: f64, _z: f64) -> f64 {
        q[0]
    }

    fn max_speeds(&self, _field: &Field<1>, grid: &Grid, _t: f64) -> Result<(f64, f64)> {
        if let VelocityField::Constant { a, b } = self.velocity {
            return Ok((a.abs(), b.abs()));
        }
        let mut sx: f64 = 0.0;
        let mut sz: f64 = 0.0;
        for j in 0..grid.nz as isize {
            for i in 0..grid.nx as isize {
                let (a, b) = self.velocity.speed_bound(grid.x_center(i), grid.z_center(j));
                sx = sx.max(a);
                sz = sz.max(b);
            }
        }
        Ok((sx, sz))
    }

    fn invalid_state(&self, q: &[f64; 1]) -> Option<&'static str> {
        (!q[0].is_finite()).then_some("non-finite value")
    }
}
