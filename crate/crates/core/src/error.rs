//! Crate-wide error type.
//!
//! Variants are grouped by how the CLI reports them: invalid inputs and
//! malformed configs exit with 2, budget refusals with 3, failed
//! certification checks with 4, and solver non-convergence with 5.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    /// Malformed or inconsistent input (bad degree, non-bijective image
    /// list, unknown config key, unparseable text form, ...).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// The request is well-formed but exceeds a configured resource budget.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// A constructed object failed its own certification check.
    #[error("certification failed: {0}")]
    Certification(String),

    /// An iterative solver ran out of iterations before reaching tolerance.
    #[error("solver did not converge: {0}")]
    NonConvergence(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl LabError {
    /// Process exit code used by the CLI for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Invalid(_) => 2,
            LabError::Budget(_) => 3,
            LabError::Certification(_) => 4,
            LabError::NonConvergence(_) => 5,
            LabError::Io(_) | LabError::Json(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
