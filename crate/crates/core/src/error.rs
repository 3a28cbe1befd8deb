//! Error type shared across the library.

use thiserror::Error;

/// Errors produced by constructors, condition checkers, and experiment
/// drivers. Pure numeric evaluators are total and do not return errors.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A parameter violated its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A sample was empty or otherwise unusable.
    #[error("invalid sample: {0}")]
    InvalidSample(String),

    /// An integrability precondition failed (the distribution is outside
    /// the class the functional is defined on).
    #[error("integrability failure: {0}")]
    Integrability(String),

    /// A condition required by a theorem/lemma does not hold for the
    /// requested configuration.
    #[error("condition violated: {0}")]
    ConditionViolated(String),

    /// Numerical routine failed to converge to the requested tolerance.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
