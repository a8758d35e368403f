use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("hyperedge {0} is empty")]
    EmptyEdge(usize),
    #[error("node id {id} out of range (num_nodes = {num_nodes})")]
    NodeOutOfRange { id: u32, num_nodes: u32 },
    #[error("parse error at {file}:{line}: {msg}")]
    ParseError {
        file: String,
        line: usize,
        msg: String,
    },
    #[error("inconsistent counts: {0}")]
    InconsistentCounts(String),
    #[error("no edges survive preprocessing")]
    EmptyResult,
    #[error("operation requires timestamps on all edges")]
    MissingTimestamps,
    #[error("operation requires node features")]
    MissingFeatures,
    #[error("candidate must contain at least 2 nodes")]
    SizeTooSmall,
    #[error("test set is empty")]
    EmptyTestSet,
    #[error("input list is empty")]
    EmptyInput,
    #[error("all node degrees are zero")]
    DegenerateDegrees,
    #[error("invalid ratio: {0}")]
    InvalidRatio(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code convention: 2 for precondition/config errors
    /// (unreadable inputs, violated preconditions), 1 for internal errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Json(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
