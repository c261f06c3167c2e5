//! Configuration, output formats and run drivers behind the `weno-tvd`
//! binary.

pub mod config;
pub mod driver;
pub mod output;

use std::path::PathBuf;

use weno_tvd::SolverError;

pub use config::{parse_config, FileConfig, OutputFormat, RunArgs, RunConfig};

pub const OUTPUT_DIR_ENV: &str = "WENO_TVD_OUT";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("solver failed: {0}")]
    Solver(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit status: 1 for bad input, 2 for failures while running.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Solver(_) | CliError::Io { .. } => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::InvalidConfig(_) | SolverError::InvalidScenario(_) | SolverError::InvalidGrid(_) => {
                CliError::Config(e.to_string())
            }
            SolverError::InvalidState { .. } => CliError::Solver(e.to_string()),
        }
    }
}
