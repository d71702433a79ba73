//! Experiment runner around `dilatia-core`: the random state-preparation
//! study, the two open-system dynamics runs, and the operator decomposition
//! inspector. Everything the binary does is reachable through this library,
//! so the full behavior is testable without spawning processes.

pub mod config;
pub mod decompose;
pub mod dynamics;
pub mod prep;
pub mod report;
pub mod svg;

use dilatia_core::Error as CoreError;

/// Everything that can go wrong in the runner, mapped onto the documented
/// process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] CoreError),

    #[error("configuration: {0}")]
    Config(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Exit codes: 2 for configuration and input problems, 3 for numeric
    /// failures, 4 for contraction violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Core(CoreError::Parse { .. }) | CliError::Core(CoreError::Argument(_)) => 2,
            CliError::Core(CoreError::ContractionViolation { .. }) => 4,
            CliError::Core(_) => 3,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
