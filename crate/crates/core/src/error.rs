use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("starting point has dimension {point} but the domain has dimension {domain}")]
    DomainMismatch { point: usize, domain: usize },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),

    #[error("objective evaluation failed at {point:?}: {message}")]
    Objective { point: Vec<f64>, message: String },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("loss threshold has not been resolved to a number")]
    UnresolvedThreshold,

    #[error("column {index} has zero variance")]
    DegenerateColumn { index: usize },

    #[error("need at least {needed} values, got {actual}")]
    TooFewValues { needed: usize, actual: usize },

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("malformed input, line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("replicate {index}: {source}")]
    Replicate {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}
