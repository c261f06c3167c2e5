use thiserror::Error;

/// Errors raised while building or advancing a simulation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A conserved state left its admissible set (non-finite, ρ ≤ 0 or ρθ ≤ 0).
    #[error("invalid state in cell ({i}, {j}): {reason}")]
    InvalidState { i: isize, j: isize, reason: String },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

impl SolverError {
    pub(crate) fn state(i: isize, j: isize, reason: impl Into<String>) -> Self {
        SolverError::InvalidState { i, j, reason: reason.into() }
    }
}

pub type Result<T, E = SolverError> = std::result::Result<T, E>;
