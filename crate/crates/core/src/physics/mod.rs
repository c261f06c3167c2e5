//! PDE models: space-dependent linear advection and the dry-atmosphere Euler
//! equations in potential-temperature form.

pub mod advection;
pub mod euler;

use crate::error::Result;
use crate::grid::{Axis, Field, GhostFill, Grid};
use crate::weno::WenoParams;

pub use advection::{AdvectionModel, VelocityField};
pub use euler::{Background, Constants, EulerModel};

/// Everything the time integrator needs from a system of balance laws with
/// `N` conserved components.
pub trait Model<const N: usize>: GhostFill<N> + Sync {
    /// Physical flux normal to `axis` at position `(x, z)` and time `t`.
    fn flux(&self, axis: Axis, q: &[f64; N], x: f64, z: f64, t: f64) -> [f64; N];

    /// [`Model::flux`] frozen at one point, for repeated evaluation there.
    fn point_flux(&self, axis: Axis, x: f64, z: f64, t: f64) -> impl Fn(&[f64; N]) -> [f64; N] + '_ {
        move |q| self.flux(axis, q, x, z, t)
    }

    /// Scalar whose interface jumps drive the flux limiter.
    fn limiter_quantity(&self, q: &[f64; N], x: f64, z: f64) -> f64;

    /// Domain maxima of the characteristic speeds `(s_x, s_z)`.
    fn max_speeds(&self, field: &Field<N>, grid: &Grid, t: f64) -> Result<(f64, f64)>;

    /// `Some(reason)` if `q` is not an admissible state.
    fn invalid_state(&self, q: &[f64; N]) -> Option<&'static str>;

    fn has_source(&self) -> bool {
        false
    }

    /// Cell-averaged source `S(Q)` on interior cells. May refill the ghost
    /// cells of `field`.
    fn source_rate(
        &self,
        _field: &mut Field<N>,
        _grid: &Grid,
        _weno: &WenoParams,
        out: &mut Field<N>,
    ) -> Result<()> {
        out.raw_mut().iter_mut().for_each(|q| *q = [0.0; N]);
        Ok(())
    }
}
