//! Error type shared by every module in the crate.

use thiserror::Error;

/// All failure modes surfaced by the library.
///
/// The variants map onto the process exit codes used by the CLI:
/// domain-style errors (bad parameters, degenerate inputs, divergent
/// integrals) exit with 2, [`Error::Capacity`] with 3 and
/// [`Error::InsufficientSamples`] with 4.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("divergent integral: {0}")]
    Divergence(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
