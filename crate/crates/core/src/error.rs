use thiserror::Error;

/// Errors produced by the bandit, posterior, and divergence machinery.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("quadrature did not converge: estimate {value:e}, error {abs_error:e} after {intervals} intervals")]
    Quadrature {
        value: f64,
        abs_error: f64,
        intervals: usize,
    },

    #[error("numeric degeneracy: {0}")]
    Degenerate(String),

    #[error("{regime}: {detail}")]
    Regime { regime: &'static str, detail: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("run failed (seed {seed}, policy {policy}, step {step}): {source}")]
    Run {
        seed: u64,
        policy: String,
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn ensure_finite(values: &[f64], what: &str) -> Result<()> {
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(invalid(format!("{what}[{i}] is not finite ({})", values[i])));
    }
    Ok(())
}

pub(crate) fn ensure_dim(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}
