use thiserror::Error;

use crate::quadrature::QuadratureError;
use crate::series::SeriesError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BohrError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("{what} is undefined at x = {x}")]
    Domain { what: &'static str, x: f64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("no sign change of lhs - target on (0, 1): lhs stays below {target} up to r = {last_r}")]
    NoRoot { target: f64, last_r: f64 },
    #[error("numerical inconsistency: {0}")]
    Inconsistent(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl BohrError {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            BohrError::Parameter(_) | BohrError::Domain { .. } => 2,
            BohrError::Verification(_) => 4,
            _ => 3,
        }
    }
}

pub type Result<T, E = BohrError> = std::result::Result<T, E>;
