use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("root finder did not converge after {iterations} iterations (worst residual {worst_residual:e})")]
    RootsNotConverged {
        iterations: usize,
        worst_residual: f64,
    },

    #[error("ill-conditioned poles: separation {separation:e} below threshold {threshold:e}")]
    IllConditionedPoles { separation: f64, threshold: f64 },

    #[error("pole {pole} outside the admissible half-plane Re < 0")]
    PoleOutsideHalfPlane { pole: Complex64 },

    #[error("branch ambiguity: {z} lies on the cut (-inf, 0]; use the boundary-value routines")]
    BranchAmbiguity { z: Complex64 },

    #[error("evaluation at pole {pole}")]
    EvaluationAtPole { pole: Complex64 },

    #[error("quadrature tolerance not met: estimate {value} with error {error_estimate:e} after {panels} panels")]
    ToleranceNotMet {
        value: Complex64,
        error_estimate: f64,
        panels: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
