use thiserror::Error;

use crate::solvers::Trace;

/// Errors produced by oracles, solvers and the experiment runner.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument violates a precondition.
    #[error("invalid input: {0}")]
    Input(String),

    /// A computation left the finite range. Solvers attach the trace recorded
    /// up to the failure.
    #[error("numeric failure: {message}")]
    Numeric {
        message: String,
        partial: Option<Box<Trace>>,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed document: {0}")]
    Format(#[from] serde_json::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric {
            message: msg.into(),
            partial: None,
        }
    }

    /// The partial trace carried by a numeric failure, if any.
    pub fn partial_trace(&self) -> Option<&Trace> {
        match self {
            Error::Numeric { partial, .. } => partial.as_deref(),
            _ => None,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(what: &str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::input(format!(
            "{what}: dimension mismatch (expected {expected}, got {got})"
        )));
    }
    Ok(())
}
