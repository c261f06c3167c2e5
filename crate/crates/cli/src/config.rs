//! Run configuration: scenario defaults, overridden by a TOML file, overridden
//! by command-line flags.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use weno_tvd::scenarios::{Scenario, SCENARIO_NAMES};
use weno_tvd::Limiter;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Vtk,
}

/// Overrides shared by `run` and `converge`.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Scenario name (see `list-scenarios`).
    pub scenario: Option<String>,
    /// TOML file with any of the options below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Cells across the domain; cells stay square.
    #[arg(long)]
    pub n: Option<usize>,
    /// Cell size, alternative to --n.
    #[arg(long, conflicts_with = "n")]
    pub dx: Option<f64>,
    #[arg(long)]
    pub end_time: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub cfl: Option<f64>,
    /// superbee or none.
    #[arg(long)]
    pub limiter: Option<Limiter>,
    /// Kinematic viscosity K in m^2/s (atmospheric scenarios).
    #[arg(long)]
    pub viscosity: Option<f64>,
    /// Front thickness of the Doswell scenarios.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Output directory.
    #[arg(long, env = crate::OUTPUT_DIR_ENV)]
    pub out: Option<PathBuf>,
    /// Comma-separated snapshot times; the end time is always written.
    #[arg(long, value_delimiter = ',')]
    pub snapshots: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Write the energy series every this many steps.
    #[arg(long)]
    pub energy_stride: Option<usize>,
}

/// Contents of a `--config` file. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub scenario: Option<String>,
    pub n: Option<usize>,
    pub dx: Option<f64>,
    pub end_time: Option<f64>,
    pub omega: Option<f64>,
    pub cfl: Option<f64>,
    pub limiter: Option<Limiter>,
    pub viscosity: Option<f64>,
    pub delta: Option<f64>,
    pub output_dir: Option<PathBuf>,
    pub snapshots: Option<Vec<f64>>,
    pub format: Option<OutputFormat>,
    pub energy_stride: Option<usize>,
    /// Resolutions for `converge`.
    pub ns: Option<Vec<usize>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub output_dir: PathBuf,
    pub format: OutputFormat,
    pub energy_stride: usize,
    /// Resolutions for `converge`, if given in the file.
    pub ns: Option<Vec<usize>>,
}

/// Resolves the final configuration with precedence flags > file > scenario
/// defaults and validates it against the scenario.
pub fn parse_config(args: &RunArgs) -> Result<RunConfig, CliError> {
    let file = match &args.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let name = args.scenario.clone().or(file.scenario.clone()).ok_or_else(|| {
        CliError::Config(format!("no scenario given; expected one of {}", SCENARIO_NAMES.join(", ")))
    })?;
    let mut sc = Scenario::by_name(&name)?;

    let n = args.n.or(if args.dx.is_some() { None } else { file.n });
    let dx = args.dx.or(if args.n.is_some() { None } else { file.dx });
    match (n, dx) {
        (Some(_), Some(_)) => return Err(CliError::Config("give either n or dx, not both".into())),
        (Some(n), None) => sc.set_cells(n)?,
        (None, Some(dx)) => sc.set_spacing(dx)?,
        (None, None) => {}
    }
    if let Some(t) = args.end_time.or(file.end_time) {
        sc.end_time = t;
    }
    if let Some(w) = args.omega.or(file.omega) {
        sc.flux.omega = w;
    }
    if let Some(c) = args.cfl.or(file.cfl) {
        sc.flux.cfl = c;
    }
    if let Some(l) = args.limiter.or(file.limiter) {
        sc.flux.limiter = l;
    }
    if let Some(k) = args.viscosity.or(file.viscosity) {
        sc.set_viscosity(k)?;
    }
    if let Some(d) = args.delta.or(file.delta) {
        sc.set_delta(d)?;
    }
    if let Some(times) = args.snapshots.clone().or(file.snapshots.clone()) {
        if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(CliError::Config(format!("snapshot times must be finite and >= 0, got {times:?}")));
        }
        sc.snapshot_times = times;
    }
    sc.validate()?;

    let energy_stride = args.energy_stride.or(file.energy_stride).unwrap_or(10);
    if energy_stride == 0 {
        return Err(CliError::Config("energy stride must be at least 1".into()));
    }
    let output_dir = args
        .out
        .clone()
        .or(file.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("output").join(&sc.name));
    Ok(RunConfig {
        scenario: sc,
        output_dir,
        format: args.format.or(file.format).unwrap_or_default(),
        energy_stride,
        ns: file.ns,
    })
}
