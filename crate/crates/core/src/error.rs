use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("width violation: {0}")]
    Width(String),
    #[error("pairing violation: {0}")]
    Pairing(String),
    #[error("unexpected closed component: {0}")]
    ClosedComponent(String),
    #[error("bundle validation failed: {}", .0.join("; "))]
    Bundle(Vec<String>),
    #[error("alpha is not normalizable: {0}")]
    NotNormalizable(String),
    #[error("search exceeded node budget of {0}")]
    ResourceLimit(usize),
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
