use thiserror::Error;

use crate::VertexId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForestError {
    #[error("edge ({0}, {1}) would close a cycle")]
    Cycle(VertexId, VertexId),
    #[error("edge ({0}, {1}) is already present")]
    DuplicateEdge(VertexId, VertexId),
    #[error("edge ({0}, {1}) is not present")]
    MissingEdge(VertexId, VertexId),
    #[error("vertices {0} and {1} are not connected")]
    NotConnected(VertexId, VertexId),
    #[error("vertex {0} would exceed degree {1}")]
    Degree(VertexId, usize),
    #[error("vertex {0} out of range")]
    OutOfRange(VertexId),
    #[error("self loop at {0}")]
    SelfLoop(VertexId),
    #[error("batch rejected at update {index}: {cause}")]
    Batch { index: usize, cause: Box<ForestError> },
    #[error("bad spec: {0}")]
    BadSpec(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("validation failed: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, ForestError>;
