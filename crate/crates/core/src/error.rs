use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid Young diagram: {0}")]
    InvalidDiagram(String),

    #[error("size mismatch: class of size {class} for diagram of size {diagram}")]
    SizeMismatch { class: usize, diagram: usize },

    #[error("partition is not noncrossing: {0}")]
    Crossing(String),

    #[error("not admissible: {0}")]
    NotAdmissible(String),

    #[error("{what} = {value} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("parameter {name} out of range: {reason}")]
    OutOfRange { name: &'static str, reason: String },

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
