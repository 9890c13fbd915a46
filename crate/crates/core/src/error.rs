use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty edge {0}")]
    EmptyEdge(String),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("vertex count {count} exceeds the configured cap {cap}")]
    TooManyVertices { count: usize, cap: usize },
    #[error("vertex {0} lies in no edge and cannot be covered")]
    Uncoverable(String),
    #[error("weight {weight} on edge {edge} is outside [0,1]")]
    WeightOutOfRange { edge: String, weight: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    #[error("malformed decomposition: {0}")]
    Structure(String),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("subedge {0} has no recorded parent edge")]
    MissingParent(String),
    #[error("assignment falsifies clause {clause}")]
    Falsified { clause: usize },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
