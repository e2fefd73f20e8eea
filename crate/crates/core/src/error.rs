use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field error: {0}")]
    Field(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid algebra: {0}")]
    Algebra(String),
    #[error("invalid module: {0}")]
    Module(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("undecided: {0}")]
    Undecided(String),
    #[error("invalid blueprint: {0}")]
    Blueprint(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("interpolation failed: {0}")]
    Interpolation(String),
    #[error("inconsistent: {0}")]
    Inconsistent(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
