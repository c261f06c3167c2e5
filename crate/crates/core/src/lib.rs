//! A WENO-TVD finite volume solver on uniform 2D Cartesian grids.
//!
//! Cell averages are reconstructed to one quadratic polynomial per cell,
//! interface fluxes are the flux-limited centred FLIC combination of
//! Lax-Friedrichs and Lax-Wendroff fluxes evaluated at two Gauss points per
//! face, time is advanced with third-order TVD Runge-Kutta, and source terms
//! enter through Strang splitting.
//!
//! Two systems are provided: scalar advection by a prescribed velocity field
//! and the Euler equations of a dry atmosphere in potential-temperature form.
//! [`scenarios`] builds the standard advection and convection test cases.

pub mod error;
pub mod flux;
pub mod grid;
pub mod integrate;
pub mod physics;
pub mod scenarios;
pub mod weno;

pub use error::{Result, SolverError};
pub use flux::{FluxConfig, Limiter};
pub use grid::{apply_bc, Axis, BcKind, Field, Grid, GridSpec, N_GHOST};
pub use integrate::{Solver, StepInfo};
pub use physics::{AdvectionModel, EulerModel, Model, VelocityField};
pub use weno::{CellPoly, WenoParams};
