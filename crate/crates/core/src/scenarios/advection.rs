//! Initial data and exact solutions of the scalar advection tests.

use std::f64::consts::PI;

use crate::grid::{Field, Grid};
use crate::physics::advection::doswell_angular_speed;
use crate::physics::VelocityField;
use crate::scenarios::quadrature::cell_average;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AdvectionInit {
    /// `sin(2πx) sin(2πz)` carried by a constant velocity.
    SinProduct,
    /// Cosine bump of radius 1/4 centred at `(1/4, 1/4)`.
    CosineBump,
    /// Front `tanh(z/δ)` wound up by the Doswell vortex.
    DoswellFront { delta: f64 },
}

impl AdvectionInit {
    pub fn initial(&self, x: f64, z: f64) -> f64 {
        match *self {
            AdvectionInit::SinProduct => (2.0 * PI * x).sin() * (2.0 * PI * z).sin(),
            AdvectionInit::CosineBump => {
                let r = (4.0 * (x - 0.25).hypot(z - 0.25)).min(1.0);
                0.5 * (1.0 + (PI * r).cos())
            }
            AdvectionInit::DoswellFront { delta } => (z / delta).tanh(),
        }
    }

    /// Pointwise reference solution at time `t`. The swirl returns its
    /// initial data, which the flow reproduces at the end of a period.
    pub fn exact(&self, velocity: &VelocityField, x: f64, z: f64, t: f64) -> f64 {
        match (*self, *velocity) {
            (AdvectionInit::SinProduct, VelocityField::Constant { a, b }) => self.initial(x - a * t, z - b * t),
            (AdvectionInit::DoswellFront { delta }, VelocityField::Doswell { vbar }) => {
                let angle = doswell_angular_speed(vbar, x.hypot(z)) * t;
                ((z * angle.cos() - x * angle.sin()) / delta).tanh()
            }
            _ => self.initial(x, z),
        }
    }

    /// Cell averages of the reference solution at time `t`.
    pub fn exact_averages(&self, velocity: &VelocityField, grid: &Grid, t: f64) -> Field<1> {
        if let (AdvectionInit::SinProduct, VelocityField::Constant { a, b }) = (*self, *velocity) {
            return Field::from_fn(grid, |i, j| {
                let sx = sin_average(grid.x_face(i as isize) - a * t, grid.dx);
                let sz = sin_average(grid.z_face(j as isize) - b * t, grid.dz);
                [sx * sz]
            });
        }
        Field::from_fn(grid, |i, j| cell_average(grid, i as isize, j as isize, |x, z| [self.exact(velocity, x, z, t)]))
    }
}

/// Average of `sin(2πs)` over `[lo, lo + h]`.
fn sin_average(lo: f64, h: f64) -> f64 {
    ((2.0 * PI * lo).cos() - (2.0 * PI * (lo + h)).cos()) / (2.0 * PI * h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{BcKind, GridSpec};

    fn unit(n: usize) -> Grid {
        Grid::new(&GridSpec {
            x_min: 0.0,
            x_max: 1.0,
            z_min: 0.0,
            z_max: 1.0,
            nx: n,
            nz: n,
            bc_x_lo: BcKind::Periodic,
            bc_x_hi: BcKind::Periodic,
            bc_z_lo: BcKind::Periodic,
            bc_z_hi: BcKind::Periodic,
        })
        .unwrap()
    }

    #[test]
    fn sin_product_periodic_in_time() {
        let v = VelocityField::Constant { a: 1.0, b: 1.0 };
        let init = AdvectionInit::SinProduct;
        for (x, z) in [(0.1, 0.3), (0.77, 0.41)] {
            assert!((init.exact(&v, x, z, 10.0) - init.initial(x, z)).abs() < 1e-12);
        }
    }

    #[test]
    fn sin_averages_match_gauss() {
        let g = unit(50);
        let v = VelocityField::Constant { a: 1.0, b: 1.0 };
        let analytic = AdvectionInit::SinProduct.exact_averages(&v, &g, 0.3);
        for (i, j, q) in analytic.interior() {
            let gauss = cell_average(&g, i as isize, j as isize, |x, z| [AdvectionInit::SinProduct.exact(&v, x, z, 0.3)]);
            assert!((q[0] - gauss[0]).abs() < 1e-9);
        }
    }

    #[test]
    fn bump_values() {
        let b = AdvectionInit::CosineBump;
        assert_eq!(b.initial(0.25, 0.25), 1.0);
        assert!(b.initial(0.75, 0.75).abs() < 1e-16);
        assert!((b.initial(0.25, 0.375) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn doswell_exact_starts_at_initial() {
        let d = AdvectionInit::DoswellFront { delta: 1.0 };
        let v = VelocityField::Doswell { vbar: 2.59807 };
        for (x, z) in [(0.3, -1.2), (-4.0, 2.5), (0.0, 0.0)] {
            assert_eq!(d.exact(&v, x, z, 0.0), d.initial(x, z));
        }
        // Far from the vortex the flow is nearly still.
        assert!((d.exact(&v, 4.9, 0.3, 4.0) - d.initial(4.9, 0.3)).abs() < 1e-2);
    }
}
