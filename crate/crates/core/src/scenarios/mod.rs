//! The standard advection and convection test cases, their initial data,
//! reference solutions and diagnostics.

pub mod advection;
pub mod atmosphere;
pub mod diagnostics;
pub mod quadrature;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SolverError};
use crate::flux::FluxConfig;
use crate::grid::{BcKind, Field, Grid, GridSpec};
use crate::integrate::{Solver, StepInfo};
use crate::physics::euler::{Background, Constants};
use crate::physics::{AdvectionModel, EulerModel, VelocityField};

pub use advection::AdvectionInit;
pub use atmosphere::{AtmosphereInit, Bubble, BubbleShape, Stratification};
pub use diagnostics::{
    convergence_order, cross_section, energy_totals, error_norms, field_extrema, front_location, mirror_asymmetry,
    EnergyTotals, ErrorNorms, Extrema,
};

pub const SCENARIO_NAMES: [&str; 9] = [
    "const-advection",
    "swirl",
    "doswell-smooth",
    "doswell-sharp",
    "bubble-neutral",
    "hot-cold",
    "density-current",
    "density-current-viscous",
    "bubble-stable",
];

/// Physics and initial data of a scenario.
#[derive(Debug, Clone, PartialEq)]
pub enum Setup {
    Advection { velocity: VelocityField, init: AdvectionInit },
    Atmosphere { init: AtmosphereInit, viscosity: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub summary: String,
    /// Domain, boundary kinds and the current resolution.
    pub grid_spec: GridSpec,
    pub end_time: f64,
    pub flux: FluxConfig,
    /// Output times besides the end time.
    pub snapshot_times: Vec<f64>,
    pub setup: Setup,
}

fn spec(bounds: [f64; 4], nx: usize, nz: usize, bc_x: BcKind, bc_z: BcKind) -> GridSpec {
    GridSpec {
        x_min: bounds[0],
        x_max: bounds[1],
        z_min: bounds[2],
        z_max: bounds[3],
        nx,
        nz,
        bc_x_lo: bc_x,
        bc_x_hi: bc_x,
        bc_z_lo: bc_z,
        bc_z_hi: bc_z,
    }
}

fn bubble(amplitude: f64, x0: f64, z0: f64, rx: f64, rz: f64, shape: BubbleShape) -> Bubble {
    Bubble { amplitude, x0, z0, rx, rz, shape }
}

impl Scenario {
    pub fn by_name(name: &str) -> Result<Scenario> {
        use BcKind::*;
        let adv = |velocity, init| Setup::Advection { velocity, init };
        let atmo = |stratification, bubbles, wind, viscosity| Setup::Atmosphere {
            init: AtmosphereInit { stratification, bubbles, wind },
            viscosity,
        };
        let doswell = |delta: f64| adv(VelocityField::Doswell { vbar: 2.59807 }, AdvectionInit::DoswellFront { delta });
        let neutral_box = [-10000.0, 10000.0, 0.0, 10000.0];
        let density_current = |k: f64| {
            atmo(
                Stratification::NEUTRAL_300,
                vec![bubble(-7.5, 0.0, 2000.0, 4000.0, 2000.0, BubbleShape::RaisedCosine)],
                0.0,
                k,
            )
        };
        let (summary, grid_spec, end_time, flux, snapshot_times, setup) = match name {
            "const-advection" => (
                "sine product advected diagonally for ten periods",
                spec([0.0, 1.0, 0.0, 1.0], 50, 50, Periodic, Periodic),
                10.0,
                FluxConfig::advection_default(),
                vec![0.0],
                adv(VelocityField::Constant { a: 1.0, b: 1.0 }, AdvectionInit::SinProduct),
            ),
            "swirl" => (
                "cosine bump deformed by a reversing swirl",
                spec([0.0, 1.0, 0.0, 1.0], 100, 100, Periodic, Periodic),
                5.0,
                FluxConfig::advection_default(),
                vec![0.0, 2.5],
                adv(VelocityField::Swirl { period: 5.0 }, AdvectionInit::CosineBump),
            ),
            "doswell-smooth" => (
                "smooth front wound up by a steady vortex",
                spec([-5.0, 5.0, -5.0, 5.0], 50, 50, Open, Open),
                4.0,
                FluxConfig::advection_default(),
                vec![0.0],
                doswell(1.0),
            ),
            "doswell-sharp" => (
                "near-discontinuous front wound up by a steady vortex",
                spec([-5.0, 5.0, -5.0, 5.0], 200, 200, Open, Open),
                4.0,
                FluxConfig::advection_default(),
                vec![0.0],
                doswell(1e-6),
            ),
            "bubble-neutral" => (
                "warm bubble rising in a neutral atmosphere",
                spec(neutral_box, 160, 80, SolidWall, SolidWall),
                1000.0,
                FluxConfig::euler_default(),
                vec![0.0, 300.0, 600.0],
                atmo(
                    Stratification::NEUTRAL_300,
                    vec![bubble(2.0, 0.0, 2000.0, 2000.0, 2000.0, BubbleShape::Cosine)],
                    0.0,
                    0.0,
                ),
            ),
            "hot-cold" => (
                "colliding warm and cold bubbles carried by a uniform wind",
                spec(neutral_box, 160, 80, Periodic, SolidWall),
                1000.0,
                FluxConfig::euler_default(),
                vec![0.0, 180.0, 250.0, 500.0],
                atmo(
                    Stratification::NEUTRAL_300,
                    vec![
                        bubble(10.0, 0.0, 2000.0, 2000.0, 2000.0, BubbleShape::Cosine),
                        bubble(-15.0, 0.0, 8000.0, 2000.0, 2000.0, BubbleShape::Cosine),
                    ],
                    20.0,
                    0.0,
                ),
            ),
            "density-current" => (
                "cold bubble collapsing into a density current, inviscid",
                spec([0.0, 20000.0, 0.0, 6000.0], 200, 60, SolidWall, SolidWall),
                900.0,
                FluxConfig::euler_default(),
                vec![0.0],
                density_current(0.0),
            ),
            "density-current-viscous" => (
                "cold bubble collapsing into a density current, K = 75 m^2/s",
                spec([0.0, 20000.0, 0.0, 6000.0], 200, 60, SolidWall, SolidWall),
                900.0,
                FluxConfig::euler_default(),
                vec![0.0],
                density_current(75.0),
            ),
            "bubble-stable" => (
                "warm bubble in a stably stratified atmosphere",
                spec([-20000.0, 20000.0, 0.0, 15000.0], 80, 30, Open, SolidWall),
                600.0,
                FluxConfig::euler_default(),
                vec![0.0],
                atmo(
                    Stratification::STABLE_4K_PER_KM,
                    vec![bubble(6.6, 0.0, 2750.0, 2500.0, 2500.0, BubbleShape::CosineSquared)],
                    0.0,
                    0.0,
                ),
            ),
            other => {
                return Err(SolverError::InvalidScenario(format!(
                    "unknown scenario '{other}'; expected one of {}",
                    SCENARIO_NAMES.join(", ")
                )))
            }
        };
        Ok(Scenario {
            name: name.to_string(),
            summary: summary.to_string(),
            grid_spec,
            end_time,
            flux,
            snapshot_times,
            setup,
        })
    }

    pub fn is_euler(&self) -> bool {
        matches!(self.setup, Setup::Atmosphere { .. })
    }

    /// Whether error norms against a reference solution are meaningful.
    pub fn has_reference_solution(&self) -> bool {
        !self.is_euler()
    }

    fn aspect(&self) -> f64 {
        let s = &self.grid_spec;
        (s.z_max - s.z_min) / (s.x_max - s.x_min)
    }

    /// Sets `nx` and derives `nz` so that cells stay square.
    pub fn set_cells(&mut self, nx: usize) -> Result<()> {
        let nz = nx as f64 * self.aspect();
        if nx == 0 || (nz - nz.round()).abs() > 1e-9 || nz.round() < 1.0 {
            return Err(SolverError::InvalidScenario(format!(
                "{} cells across does not give square cells on this domain",
                nx
            )));
        }
        self.grid_spec.nx = nx;
        self.grid_spec.nz = nz.round() as usize;
        Ok(())
    }

    /// Sets the (square) cell size; it must divide the domain evenly.
    pub fn set_spacing(&mut self, dx: f64) -> Result<()> {
        let nx = (self.grid_spec.x_max - self.grid_spec.x_min) / dx;
        if !(dx > 0.0) || (nx - nx.round()).abs() > 1e-9 * nx.max(1.0) {
            return Err(SolverError::InvalidScenario(format!("cell size {dx} does not divide the domain evenly")));
        }
        self.set_cells(nx.round() as usize)
    }

    pub fn set_viscosity(&mut self, k: f64) -> Result<()> {
        match &mut self.setup {
            Setup::Atmosphere { viscosity, .. } if k >= 0.0 && k.is_finite() => {
                *viscosity = k;
                Ok(())
            }
            Setup::Atmosphere { .. } => Err(SolverError::InvalidConfig(format!("viscosity must be >= 0, got {k}"))),
            Setup::Advection { .. } => Err(SolverError::InvalidConfig("viscosity applies to atmospheric scenarios only".into())),
        }
    }

    pub fn set_delta(&mut self, delta: f64) -> Result<()> {
        match &mut self.setup {
            Setup::Advection { init: AdvectionInit::DoswellFront { delta: d }, .. } if delta > 0.0 => {
                *d = delta;
                Ok(())
            }
            _ => Err(SolverError::InvalidConfig(format!(
                "front thickness {delta} needs a Doswell scenario and a positive value"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.end_time > 0.0 && self.end_time.is_finite()) {
            return Err(SolverError::InvalidScenario(format!("end time must be positive, got {}", self.end_time)));
        }
        self.flux.validate()?;
        let dx = (self.grid_spec.x_max - self.grid_spec.x_min) / self.grid_spec.nx as f64;
        let dz = (self.grid_spec.z_max - self.grid_spec.z_min) / self.grid_spec.nz as f64;
        if ((dx - dz) / dx).abs() > 1e-9 {
            return Err(SolverError::InvalidScenario(format!("cells must be square, got {dx} x {dz}")));
        }
        Grid::new(&self.grid_spec)?;
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(&self.grid_spec)
    }

    /// Snapshot times inside `[0, end_time]`, sorted, always including both
    /// ends.
    pub fn output_times(&self) -> Vec<f64> {
        let mut times: Vec<f64> = self
            .snapshot_times
            .iter()
            .copied()
            .filter(|t| *t >= 0.0 && *t < self.end_time)
            .chain([0.0, self.end_time])
            .collect();
        times.sort_by(f64::total_cmp);
        times.dedup();
        times
    }

    pub fn build(&self) -> Result<Simulation> {
        self.validate()?;
        let grid = self.grid()?;
        match &self.setup {
            Setup::Advection { velocity, init } => {
                let field = Field::from_fn(&grid, |i, j| {
                    quadrature::cell_average(&grid, i as isize, j as isize, |x, z| [init.initial(x, z)])
                });
                let solver = Solver::new(grid, AdvectionModel::new(*velocity), self.flux)?;
                Ok(Simulation::Advection(AdvectionRun { solver, field, init: *init, t: 0.0 }))
            }
            Setup::Atmosphere { init, viscosity } => {
                let consts = Constants::dry_air();
                let field = init.field(&consts, &grid)?;
                let background = init.background(&consts, &grid);
                let model = EulerModel::new(consts).with_viscosity(*viscosity).with_background(background.clone());
                let solver = Solver::new(grid, model, self.flux)?;
                Ok(Simulation::Atmosphere(AtmosphereRun { solver, field, background, wind: init.wind, t: 0.0 }))
            }
        }
    }
}

pub enum Simulation {
    Advection(AdvectionRun),
    Atmosphere(AtmosphereRun),
}

pub struct AdvectionRun {
    pub solver: Solver<AdvectionModel, 1>,
    pub field: Field<1>,
    pub init: AdvectionInit,
    pub t: f64,
}

impl AdvectionRun {
    pub fn grid(&self) -> &Grid {
        &self.solver.grid
    }

    /// Cell averages of the reference solution at time `t`.
    pub fn reference(&self, t: f64) -> Field<1> {
        self.init.exact_averages(&self.solver.model.velocity, &self.solver.grid, t)
    }

    pub fn errors(&self) -> ErrorNorms {
        error_norms(&self.field, &self.reference(self.t), &self.solver.grid)
    }

    pub fn advance_to(
        &mut self,
        t_end: f64,
        stops: &[f64],
        observer: impl FnMut(&StepInfo, &Field<1>) -> Result<()>,
    ) -> Result<StepInfo> {
        let info = self.solver.advance(&mut self.field, self.t, t_end, stops, observer)?;
        self.t = info.t;
        Ok(info)
    }
}

pub struct AtmosphereRun {
    pub solver: Solver<EulerModel, 4>,
    pub field: Field<4>,
    pub background: Background,
    pub wind: f64,
    pub t: f64,
}

impl AtmosphereRun {
    pub fn grid(&self) -> &Grid {
        &self.solver.grid
    }

    pub fn energy(&self) -> Result<EnergyTotals> {
        energy_totals(&self.solver.model.consts, &self.field, &self.solver.grid)
    }

    pub fn extrema(&self) -> Extrema {
        field_extrema(&self.field, &self.background)
    }

    pub fn front_location(&self) -> f64 {
        front_location(&self.field, &self.solver.grid, &self.background)
    }

    /// Where the vertical line through `x = 0` has been carried by the
    /// initial wind, wrapped into a periodic domain.
    pub fn drifted_axis(&self) -> f64 {
        let g = &self.solver.grid;
        let mut x = self.wind * self.t;
        if g.bc_x_lo == BcKind::Periodic {
            let width = g.x_max - g.x_min;
            x = g.x_min + (x - g.x_min).rem_euclid(width);
        }
        x
    }

    /// Relative mirror asymmetry about [`Self::drifted_axis`] with the
    /// horizontal momentum treated as odd. The uniform wind is removed first.
    pub fn mirror_asymmetry(&self) -> Result<f64> {
        let mut f = self.field.clone();
        let wind = self.wind;
        for q in f.raw_mut() {
            q[1] -= q[0] * wind;
        }
        mirror_asymmetry(&f, &self.solver.grid, self.drifted_axis(), &[1])
    }

    pub fn advance_to(
        &mut self,
        t_end: f64,
        stops: &[f64],
        observer: impl FnMut(&StepInfo, &Field<4>) -> Result<()>,
    ) -> Result<StepInfo> {
        let info = self.solver.advance(&mut self.field, self.t, t_end, stops, observer)?;
        self.t = info.t;
        Ok(info)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub linf: f64,
    pub linf_order: Option<f64>,
    pub l1: f64,
    pub l1_order: Option<f64>,
}

/// Runs `base` to its end time at every resolution in `ns` and tabulates
/// the errors against the reference solution.
pub fn convergence_study(base: &Scenario, ns: &[usize]) -> Result<Vec<ConvergenceRow>> {
    if !base.has_reference_solution() {
        return Err(SolverError::InvalidScenario(format!("scenario '{}' has no reference solution", base.name)));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(ns.len());
    for &n in ns {
        let mut sc = base.clone();
        sc.set_cells(n)?;
        let Simulation::Advection(mut run) = sc.build()? else {
            unreachable!("reference solutions exist for advection only")
        };
        run.advance_to(sc.end_time, &[], |_, _| Ok(()))?;
        let e = run.errors();
        let (linf_order, l1_order) = match rows.last() {
            Some(prev) => (Some(convergence_order(prev.linf, e.linf)), Some(convergence_order(prev.l1, e.l1))),
            None => (None, None),
        };
        rows.push(ConvergenceRow { n, linf: e.linf, linf_order, l1: e.l1, l1_order });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_builds() {
        for name in SCENARIO_NAMES {
            let sc = Scenario::by_name(name).unwrap();
            sc.validate().unwrap();
            assert_eq!(sc.name, name);
        }
        assert!(matches!(Scenario::by_name("nope"), Err(SolverError::InvalidScenario(_))));
    }

    #[test]
    fn default_resolutions() {
        let dx = |n: &str| {
            let s = Scenario::by_name(n).unwrap().grid_spec;
            (s.x_max - s.x_min) / s.nx as f64
        };
        assert_eq!(dx("const-advection"), 0.02);
        assert_eq!(dx("bubble-neutral"), 125.0);
        assert_eq!(dx("hot-cold"), 125.0);
        assert_eq!(dx("density-current"), 100.0);
        assert_eq!(dx("bubble-stable"), 500.0);
        let c = Scenario::by_name("const-advection").unwrap();
        assert_eq!((c.flux.omega, c.flux.cfl), (0.5, 0.45));
    }

    #[test]
    fn resolution_overrides() {
        let mut s = Scenario::by_name("density-current").unwrap();
        s.set_spacing(50.0).unwrap();
        assert_eq!((s.grid_spec.nx, s.grid_spec.nz), (400, 120));
        assert!(s.set_spacing(70.0).is_err());
        assert!(s.set_cells(7).is_err());
        let mut a = Scenario::by_name("swirl").unwrap();
        a.set_cells(400).unwrap();
        assert_eq!(a.grid_spec.nz, 400);
        assert!(a.set_viscosity(1.0).is_err());
        assert!(a.set_delta(0.5).is_err());
        let mut d = Scenario::by_name("doswell-smooth").unwrap();
        d.set_delta(0.5).unwrap();
        assert!(d.set_delta(0.0).is_err());
    }

    #[test]
    fn output_times_sorted_with_ends() {
        let s = Scenario::by_name("bubble-neutral").unwrap();
        assert_eq!(s.output_times(), vec![0.0, 300.0, 600.0, 1000.0]);
    }

    #[test]
    fn initial_extrema_of_neutral_bubble() {
        let Simulation::Atmosphere(run) = Scenario::by_name("bubble-neutral").unwrap().build().unwrap() else {
            panic!()
        };
        let ex = run.extrema();
        // The centre (0, 2000) is a cell corner, so averages stay below 2.
        assert!(ex.theta_prime.max > 1.99 && ex.theta_prime.max <= 2.0);
        assert_eq!((ex.u.min, ex.u.max, ex.w.min, ex.w.max), (0.0, 0.0, 0.0, 0.0));
        assert_eq!(run.mirror_asymmetry().unwrap(), 0.0);
        let e = run.energy().unwrap();
        assert_eq!(e.kinetic, 0.0);
    }

    #[test]
    fn density_current_front_starts_empty() {
        let Simulation::Atmosphere(run) = Scenario::by_name("density-current").unwrap().build().unwrap() else {
            panic!()
        };
        // At the lowest centre (z = 50) the bubble reaches θ' ≈ -0.0139 only.
        let tp = diagnostics::theta_prime(run.field.get(0, 0), &run.background, 0);
        assert!(tp < 0.0 && tp > -1.0);
        assert_eq!(run.front_location(), 0.0);
    }

    #[test]
    fn centre_outside_domain_rejected() {
        let mut s = Scenario::by_name("bubble-neutral").unwrap();
        if let Setup::Atmosphere { init, .. } = &mut s.setup {
            init.bubbles[0].x0 = 20000.0;
        }
        assert!(matches!(s.build(), Err(SolverError::InvalidScenario(_))));
    }
}
