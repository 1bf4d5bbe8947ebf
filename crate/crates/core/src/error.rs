//! Error type shared by every module of the crate.

use thiserror::Error;

use crate::lifshitz::PressureResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The caller used an operation in a way its contract forbids.
    #[error("contract error: {0}")]
    Contract(String),

    /// The Matsubara series did not converge within the allowed number of terms.
    #[error(
        "Matsubara series not converged after {} terms (partial pressure {:.6e} Pa, tail estimate {:.3e} Pa)",
        partial.terms_used, partial.pressure, partial.truncation_estimate
    )]
    NotConverged { partial: Box<PressureResult> },

    #[error("no transition found: {0}")]
    NoTransition(String),

    /// The dataset cannot constrain the requested fit.
    #[error("ill-conditioned fit: {0}")]
    Conditioning(String),

    /// Malformed tabular input; `line` is 1-based.
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    /// One or more configuration problems, all reported together.
    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by malformed input or configuration rather than physics.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::Config(_) | Error::Io(_))
    }
}

/// Fails with a domain error unless `value` is finite and strictly positive.
pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{name} must be finite and > 0, got {value}"
        )))
    }
}

/// Fails with a domain error unless `value` is finite and non-negative.
pub(crate) fn ensure_non_negative(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{name} must be finite and >= 0, got {value}"
        )))
    }
}
