use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("immersion violated: jacobian is rank deficient at parameter {param:?}")]
    ImmersionViolation { param: Vec<f64> },

    #[error("parameter {param:?} lies outside the shape domain")]
    OutOfDomain { param: Vec<f64> },

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("point cloud is empty")]
    EmptyCloud,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("non-finite coordinate at index {0}")]
    NonFinite(usize),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("closed ball of radius {radius} around the query point has zero mass")]
    EmptyNeighborhood { radius: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("filtration is not monotone: {0}")]
    NonMonotone(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
