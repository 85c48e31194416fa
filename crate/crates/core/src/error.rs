use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the laboratory.
///
/// Variants carry plain data so that reports can be cloned and compared.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource budget exceeded: {0}")]
    Resource(String),

    /// |ζ| fell below the singularity threshold; callers integrating log|ζ| should subdivide.
    #[error("zeta is numerically zero at {sigma} + {t}i (|zeta| = {modulus:e})")]
    Singularity { sigma: f64, t: f64, modulus: f64 },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("argument tracking failed at t = {t}: {reason}")]
    Tracking { t: f64, reason: String },

    #[error("zero census on [{lo}, {hi}] found {found} ordinates, argument principle expects {expected}")]
    ZeroCount {
        lo: f64,
        hi: f64,
        found: usize,
        expected: i64,
    },

    #[error("i/o error at {}: {message}", path.display())]
    Io { path: PathBuf, message: String },
}

pub type Result<T> = std::result::Result<T, LabError>;

impl LabError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        LabError::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, err: impl std::fmt::Display) -> Self {
        LabError::Io {
            path: path.into(),
            message: err.to_string(),
        }
    }
}
