use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degree sequence is not graphical")]
    NotGraphical,

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("classification mismatch: expected {expected}, found {found}")]
    ClassificationMismatch { expected: String, found: String },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
