use thiserror::Error;

/// Errors raised across the crate.
///
/// Variants are grouped so that a command-line front end can map them onto
/// stable exit codes with [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("generator index {index} out of range ({count} generators)")]
    GeneratorIndex { index: usize, count: usize },

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("action is not free: {0}")]
    NonFreeAction(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("limit exceeded: {0}")]
    Limit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// 0 success, 2 verification failure, 3 precondition failure, 4 I/O or schema error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Verification(_) | Error::NonFreeAction(_) => 2,
            Error::Io(_) | Error::Json(_) | Error::Schema(_) => 4,
            _ => 3,
        }
    }
}
