use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("node `{node}` has conflicting labels `{first}` and `{second}`")]
    ConflictingLabel {
        node: String,
        first: String,
        second: String,
    },

    #[error("node `{0}` is unlabeled")]
    Unlabeled(String),

    #[error("node `{0}` has no neighbors; add self-loops to isolated nodes first")]
    IsolatedNode(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("need at least two classes, found {0}")]
    TooFewClasses(usize),

    #[error("non-finite feature value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("{0}")]
    Mismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
