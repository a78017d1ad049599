use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("degree {degree} exceeds the completion bound {bound}")]
    BoundExceeded { degree: usize, bound: usize },
    #[error("completion failed: {0}")]
    CompletionFailed(String),
    #[error("unsupported rank N = {0}")]
    UnsupportedRank(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("letter outside the subalgebra: {0}")]
    OutOfSubalgebra(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("linear program: {0}")]
    Lp(String),
}

pub type Result<T> = std::result::Result<T, Error>;
