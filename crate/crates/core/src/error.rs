//! Crate-wide error type.

/// Errors produced by any layer of the pipeline.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (asymmetry {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPsd { eigenvalue: f64 },

    #[error("iteration cap reached without convergence (residual {residual:.3e})")]
    Convergence { residual: f64 },

    #[error("contraction violated: magnitude {magnitude} exceeds unity")]
    ContractionViolation { magnitude: f64 },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("gate unsupported for export: {0}")]
    UnsupportedGate(String),

    #[error("insufficient statistics: {0}")]
    InsufficientStatistics(String),

    #[error("ensemble does not reconstruct the target state (residual {residual:.3e})")]
    EnsembleValidation { residual: f64 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
