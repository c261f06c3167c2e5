//! Runs a configured scenario to its end time and writes snapshots, the energy
//! series and a JSON summary.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use weno_tvd::scenarios::{
    convergence_study, cross_section, AdvectionInit, AdvectionRun, AtmosphereRun, ConvergenceRow, ErrorNorms,
    Extrema, Setup, Simulation,
};
use weno_tvd::{SolverError, StepInfo};

use crate::output::{snapshot_name, Snapshot};
use crate::{CliError, RunConfig};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub scenario: String,
    pub nx: usize,
    pub nz: usize,
    pub dx: f64,
    pub end_time: f64,
    pub omega: f64,
    pub cfl: f64,
    pub limiter: weno_tvd::Limiter,
    pub steps: usize,
    pub outputs: Vec<OutputRecord>,
    /// Error norms at the end time against the reference solution.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub errors: Option<ErrorNorms>,
    /// Largest `|E_total / E_total(0) - 1|` over the sampled steps.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_energy_drift: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRecord {
    pub t: f64,
    pub step: usize,
    pub file: String,
    /// Range of the advected quantity (advection scenarios).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extrema: Option<Extrema>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub front_location: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy_drift: Option<f64>,
    /// Relative mirror asymmetry about the wind-carried axis.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mirror_asymmetry: Option<f64>,
}

impl OutputRecord {
    fn new(t: f64, step: usize, file: String) -> Self {
        OutputRecord {
            t,
            step,
            file,
            q_min: None,
            q_max: None,
            extrema: None,
            front_location: None,
            energy_drift: None,
            mirror_asymmetry: None,
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Adds the step and time of the failure to a solver error.
fn with_context(e: SolverError, last: &StepInfo) -> CliError {
    match CliError::from(e) {
        CliError::Solver(msg) => CliError::Solver(format!("after step {} at t = {}: {msg}", last.step, last.t)),
        other => other,
    }
}

/// Runs `cfg` and writes every artifact into `cfg.output_dir`.
pub fn run_scenario(cfg: &RunConfig) -> Result<RunSummary, CliError> {
    let dir = &cfg.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let sc = &cfg.scenario;
    let mut summary = RunSummary {
        scenario: sc.name.clone(),
        nx: sc.grid_spec.nx,
        nz: sc.grid_spec.nz,
        dx: (sc.grid_spec.x_max - sc.grid_spec.x_min) / sc.grid_spec.nx as f64,
        end_time: sc.end_time,
        omega: sc.flux.omega,
        cfl: sc.flux.cfl,
        limiter: sc.flux.limiter,
        steps: 0,
        outputs: Vec::new(),
        errors: None,
        max_energy_drift: None,
    };
    match sc.build()? {
        Simulation::Advection(mut run) => run_advection(cfg, &mut run, &mut summary)?,
        Simulation::Atmosphere(mut run) => run_atmosphere(cfg, &mut run, &mut summary)?,
    }
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    write_file(&dir.join("summary.json"), &(json + "\n"))?;
    Ok(summary)
}

fn run_advection(cfg: &RunConfig, run: &mut AdvectionRun, summary: &mut RunSummary) -> Result<(), CliError> {
    let sc = &cfg.scenario;
    let mut step = 0;
    for (k, &t) in sc.output_times().iter().enumerate() {
        let mut last = StepInfo { step, t: run.t, dt: 0.0 };
        if t > run.t {
            let base = step;
            run.advance_to(t, &[], |info, _| {
                last = StepInfo { step: base + info.step, ..*info };
                Ok(())
            })
            .map_err(|e| with_context(e, &last))?;
            step = last.step;
        }
        let name = snapshot_name(k, t, cfg.format);
        Snapshot::advection(&run.field, run.grid(), t).write(&cfg.output_dir.join(&name), cfg.format)?;
        let (lo, hi) = run
            .field
            .interior()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, _, q)| (lo.min(q[0]), hi.max(q[0])));
        let mut rec = OutputRecord::new(t, step, name);
        rec.q_min = Some(lo);
        rec.q_max = Some(hi);
        eprintln!("{}: t = {t} after {step} steps, q in [{lo:.6e}, {hi:.6e}]", sc.name);
        summary.outputs.push(rec);
    }
    summary.steps = step;
    if sc.has_reference_solution() {
        summary.errors = Some(run.errors());
    }
    if matches!(sc.setup, Setup::Advection { init: AdvectionInit::DoswellFront { .. }, .. }) {
        let mut text = String::from("z,q\n");
        for (z, q) in cross_section(&run.field, run.grid(), 0.0) {
            let _ = writeln!(text, "{z:.16e},{q:.16e}");
        }
        write_file(&cfg.output_dir.join("cross_section_x0.csv"), &text)?;
    }
    Ok(())
}

fn run_atmosphere(cfg: &RunConfig, run: &mut AtmosphereRun, summary: &mut RunSummary) -> Result<(), CliError> {
    let sc = &cfg.scenario;
    let grid = run.grid().clone();
    let consts = run.solver.model.consts;
    let e0 = run.energy()?;
    let reference = e0.total();
    let energy_path = cfg.output_dir.join("energy.csv");
    let mut energy = String::from("t,E_int,E_kin,E_pot,E_total\n");
    let push_energy = |text: &mut String, t: f64, e: weno_tvd::scenarios::EnergyTotals| {
        let n = e.normalized(reference);
        let _ = writeln!(text, "{t:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", n.internal, n.kinetic, n.potential, n.total());
        (e.total() / reference - 1.0).abs()
    };
    let mut max_drift = push_energy(&mut energy, 0.0, e0);
    let front = sc.name.starts_with("density-current");
    let stride = cfg.energy_stride;

    let mut step = 0;
    let mut result = Ok(());
    for (k, &t) in sc.output_times().iter().enumerate() {
        let mut last = StepInfo { step, t: run.t, dt: 0.0 };
        if t > run.t {
            let base = step;
            let outcome = run.advance_to(t, &[], |info, field| {
                last = StepInfo { step: base + info.step, ..*info };
                if last.step % stride == 0 {
                    let e = weno_tvd::scenarios::energy_totals(&consts, field, &grid)?;
                    max_drift = max_drift.max(push_energy(&mut energy, info.t, e));
                }
                Ok(())
            });
            step = last.step;
            if let Err(e) = outcome {
                result = Err(with_context(e, &last));
                break;
            }
            if step % stride != 0 {
                let e = run.energy()?;
                max_drift = max_drift.max(push_energy(&mut energy, t, e));
            }
        }
        let name = snapshot_name(k, t, cfg.format);
        Snapshot::atmosphere(&run.field, &grid, t, &consts, &run.background)?
            .write(&cfg.output_dir.join(&name), cfg.format)?;
        let mut rec = OutputRecord::new(t, step, name);
        let ex = run.extrema();
        rec.extrema = Some(ex);
        rec.energy_drift = Some((run.energy()?.total() / reference - 1.0).abs());
        // Undefined when the carried axis falls between cell centres and faces
        // or lies on the domain edge.
        let axis = run.drifted_axis();
        if axis > grid.x_min && axis < grid.x_max {
            rec.mirror_asymmetry = run.mirror_asymmetry().ok();
        }
        if front {
            rec.front_location = Some(run.front_location());
        }
        eprintln!(
            "{}: t = {t} after {step} steps, theta' in [{:.4}, {:.4}], w in [{:.4}, {:.4}]",
            sc.name, ex.theta_prime.min, ex.theta_prime.max, ex.w.min, ex.w.max
        );
        summary.outputs.push(rec);
    }
    summary.steps = step;
    summary.max_energy_drift = Some(max_drift);
    write_file(&energy_path, &energy)?;
    result
}

/// Runs the scenario at every resolution in `ns`, writes `convergence.csv`
/// and returns the table.
pub fn run_convergence(cfg: &RunConfig, ns: &[usize]) -> Result<Vec<ConvergenceRow>, CliError> {
    if ns.is_empty() {
        return Err(CliError::Config("no resolutions given".into()));
    }
    let dir: &PathBuf = &cfg.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let rows = convergence_study(&cfg.scenario, ns)?;
    write_file(&dir.join("convergence.csv"), &convergence_csv(&rows))?;
    Ok(rows)
}

pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let opt = |o: Option<f64>| o.map(|v| format!("{v:.4}")).unwrap_or_default();
    let mut text = String::from("n,linf,linf_order,l1,l1_order\n");
    for r in rows {
        let _ = writeln!(text, "{},{:.6e},{},{:.6e},{}", r.n, r.linf, opt(r.linf_order), r.l1, opt(r.l1_order));
    }
    text
}

/// Fixed-width table in the layout of the usual convergence tables.
pub fn convergence_table(rows: &[ConvergenceRow]) -> String {
    let opt = |o: Option<f64>| o.map(|v| format!("{v:.2}")).unwrap_or_default();
    let mut text = format!("{:>6}  {:>12}  {:>6}  {:>12}  {:>6}\n", "N", "L_inf", "order", "L_1", "order");
    for r in rows {
        let _ = writeln!(
            text,
            "{:>6}  {:>12.4e}  {:>6}  {:>12.4e}  {:>6}",
            r.n,
            r.linf,
            opt(r.linf_order),
            r.l1,
            opt(r.l1_order)
        );
    }
    text
}
