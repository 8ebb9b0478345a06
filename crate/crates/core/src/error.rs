use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("expected {expected} values for m={arity}, n={resolution}, got {got}")]
    Length {
        arity: usize,
        resolution: usize,
        expected: usize,
        got: usize,
    },
    #[error("arity and resolution must be at least 1 (got m={arity}, n={resolution})")]
    EmptyShape { arity: usize, resolution: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("coordinate {coord} out of range for arity {arity}")]
    Coordinate { coord: usize, arity: usize },
    #[error("cell index {cell} out of range for resolution {resolution}")]
    Cell { cell: usize, resolution: usize },
    #[error("invalid subset: {0}")]
    Subset(String),
    #[error("invalid alpha: {0}")]
    Alpha(String),
    #[error("alpha is incompatible with {cells} cells: {detail}")]
    Incompatible { cells: usize, detail: String },
    #[error("invalid rational {0:?}")]
    ParseRational(String),
    #[error("invalid partition: {0}")]
    Partition(String),
    #[error("invalid graph: {0}")]
    Graph(String),
    #[error("invalid graphon: {0}")]
    Graphon(String),
    #[error("{0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
