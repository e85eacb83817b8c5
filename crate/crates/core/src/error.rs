use thiserror::Error;

/// Errors raised by the fitting, detection, simulation and harness layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The data cannot support the requested estimate (all zeros, all equal, too few points).
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    /// An iterative estimator hit its iteration cap before meeting tolerance.
    #[error("no convergence after {iterations} iterations (last step {last_step:e})")]
    NonConvergence { iterations: usize, last_step: f64 },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("empty input: {0}")]
    EmptyInput(String),

    /// Every candidate family failed to fit.
    #[error("no candidate family could be fitted: {0}")]
    NoFit(String),

    #[error("invalid configuration: `{key}`: {reason}")]
    InvalidConfig { key: String, reason: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::DegenerateData(msg.into())
    }

    pub(crate) fn config(key: &str, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            key: key.to_string(),
            reason: reason.into(),
        }
    }

    /// True for failures of the numerical layer (degenerate fits, non-convergence).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::DegenerateData(_) | Error::NonConvergence { .. } | Error::NoFit(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
