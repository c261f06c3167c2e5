//! Hydrostatic reference atmospheres and potential-temperature bubbles.

use std::f64::consts::PI;

use crate::error::{Result, SolverError};
use crate::grid::{Field, Grid, N_GHOST};
use crate::physics::euler::{Background, Constants};
use crate::scenarios::quadrature::{cell_average, row_average};

/// Reference potential temperature profile `θ̄(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stratification {
    Neutral { theta: f64 },
    /// `θ̄ = theta0 + lapse z` with `lapse > 0`.
    Stable { theta0: f64, lapse: f64 },
}

impl Stratification {
    pub const NEUTRAL_300: Stratification = Stratification::Neutral { theta: 300.0 };
    pub const STABLE_4K_PER_KM: Stratification = Stratification::Stable { theta0: 300.0, lapse: 0.004 };

    pub fn theta(&self, z: f64) -> f64 {
        match *self {
            Stratification::Neutral { theta } => theta,
            Stratification::Stable { theta0, lapse } => theta0 + lapse * z,
        }
    }

    /// Exner pressure solving `c_p θ̄ dπ/dz = -g` with `π(0) = 1`.
    pub fn exner(&self, c: &Constants, z: f64) -> f64 {
        match *self {
            Stratification::Neutral { theta } => 1.0 - c.g * z / (c.c_p * theta),
            Stratification::Stable { theta0, lapse } => {
                1.0 - c.g / (c.c_p * lapse) * (self.theta(z) / theta0).ln()
            }
        }
    }

    /// Closed-form `dπ/dz`.
    pub fn exner_slope(&self, c: &Constants, z: f64) -> f64 {
        -c.g / (c.c_p * self.theta(z))
    }

    /// `ρ = P0 / (R_d θ̄) π^(c_v/R_d)`.
    pub fn density(&self, c: &Constants, z: f64) -> f64 {
        c.p0 / (c.r_d * self.theta(z)) * self.exner(c, z).powf(c.c_v / c.r_d)
    }

    /// `|c_p θ̄ dπ/dz + g|` at height `z`.
    pub fn balance_residual(&self, c: &Constants, z: f64) -> f64 {
        (c.c_p * self.theta(z) * self.exner_slope(c, z) + c.g).abs()
    }

    /// Rejects profiles whose Exner pressure or temperature is not positive
    /// on `[z_lo, z_hi]`.
    pub fn check_range(&self, c: &Constants, z_lo: f64, z_hi: f64) -> Result<()> {
        for z in [z_lo, z_hi] {
            if !(self.theta(z) > 0.0) || !(self.exner(c, z) > 0.0) {
                return Err(SolverError::InvalidScenario(format!(
                    "reference atmosphere breaks down at z = {z} m (theta {}, exner {})",
                    self.theta(z),
                    self.exner(c, z)
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BubbleShape {
    /// `A cos(πL/2)`.
    Cosine,
    /// `A (cos(πL) + 1)`.
    RaisedCosine,
    /// `A cos²(πL/2)`.
    CosineSquared,
}

/// Potential-temperature perturbation supported on the ellipse `L <= 1`,
/// `L² = ((x - x0)/rx)² + ((z - z0)/rz)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bubble {
    pub amplitude: f64,
    pub x0: f64,
    pub z0: f64,
    pub rx: f64,
    pub rz: f64,
    pub shape: BubbleShape,
}

impl Bubble {
    pub fn value(&self, x: f64, z: f64) -> f64 {
        let l = ((x - self.x0) / self.rx).hypot((z - self.z0) / self.rz);
        if l > 1.0 {
            return 0.0;
        }
        match self.shape {
            BubbleShape::Cosine => self.amplitude * (0.5 * PI * l).cos(),
            BubbleShape::RaisedCosine => self.amplitude * ((PI * l).cos() + 1.0),
            BubbleShape::CosineSquared => {
                let c = (0.5 * PI * l).cos();
                self.amplitude * c * c
            }
        }
    }
}

/// Complete description of an atmospheric initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct AtmosphereInit {
    pub stratification: Stratification,
    pub bubbles: Vec<Bubble>,
    /// Uniform initial horizontal wind.
    pub wind: f64,
}

impl AtmosphereInit {
    pub fn theta_prime(&self, x: f64, z: f64) -> f64 {
        self.bubbles.iter().map(|b| b.value(x, z)).sum()
    }

    pub fn validate(&self, c: &Constants, grid: &Grid) -> Result<()> {
        self.stratification.check_range(c, grid.z_min - N_GHOST as f64 * grid.dz, grid.z_max + N_GHOST as f64 * grid.dz)?;
        for b in &self.bubbles {
            let inside = (grid.x_min..=grid.x_max).contains(&b.x0) && (grid.z_min..=grid.z_max).contains(&b.z0);
            if !inside {
                return Err(SolverError::InvalidScenario(format!(
                    "perturbation centre ({}, {}) lies outside the domain",
                    b.x0, b.z0
                )));
            }
        }
        Ok(())
    }

    /// Pointwise conserved state. The perturbation changes θ but not ρ.
    pub fn state(&self, c: &Constants, x: f64, z: f64) -> [f64; 4] {
        let rho = self.stratification.density(c, z);
        let theta = self.stratification.theta(z) + self.theta_prime(x, z);
        [rho, rho * self.wind, 0.0, rho * theta]
    }

    fn reference_state(&self, c: &Constants, z: f64) -> [f64; 4] {
        let rho = self.stratification.density(c, z);
        [rho, rho * self.wind, 0.0, rho * self.stratification.theta(z)]
    }

    /// Cell averages of the initial state.
    pub fn field(&self, c: &Constants, grid: &Grid) -> Result<Field<4>> {
        self.validate(c, grid)?;
        Ok(Field::from_fn(grid, |i, j| cell_average(grid, i as isize, j as isize, |x, z| self.state(c, x, z))))
    }

    /// Row averages of the unperturbed state over every padded row.
    pub fn background(&self, c: &Constants, grid: &Grid) -> Background {
        let g = N_GHOST as isize;
        let rows = (-g..grid.nz as isize + g)
            .map(|j| row_average(grid, j, |z| self.reference_state(c, z)))
            .collect();
        Background::from_rows(rows)
    }
}
