use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid assignment entry {value} at vertex {index}; expected +1 or -1")]
    InvalidAssignment { index: usize, value: i8 },

    #[error("invalid encoding: {0}")]
    InvalidEncoding(String),

    #[error("unsupported operation: {0}")]
    Unsupported(&'static str),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("instance too large for exhaustive search: n = {n} exceeds {max}")]
    TooLarge { n: usize, max: usize },

    #[error("objective returned non-finite value {value} at evaluation {eval}")]
    NonFiniteObjective { eval: usize, value: f64 },

    #[error("expectation value has imaginary residual {0:e}")]
    ComplexExpectation(f64),
}
