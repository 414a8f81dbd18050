use thiserror::Error;

/// Errors produced while building measures or running certified computations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed rational `{0}`")]
    MalformedRational(String),

    #[error("invalid measure spec: {0}")]
    InvalidSpec(String),

    #[error("images of the maps overlap or touch: [{0}] and [{1}]")]
    SeparationViolated(String, String),

    #[error("weights sum to {0}, expected 1")]
    WeightSum(String),

    #[error("maps do not share a single similarity dimension: {0}")]
    InconsistentDimension(String),

    #[error("cannot decide the order of dimensions {0} and {1}")]
    IndeterminateDimension(String, String),

    #[error("node budget of {budget} exhausted during {what}")]
    Budget { what: &'static str, budget: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point {x} is not inside the interval {interval}")]
    NotInInterval { x: String, interval: String },

    #[error("operation requires a single-measure dimension class: {0}")]
    UnsupportedSum(String),
}

pub type Result<T> = std::result::Result<T, Error>;
