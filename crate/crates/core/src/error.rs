use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("not nilpotent: {0}")]
    NotNilpotent(String),

    /// Every generic draw produced a singular change of basis.
    #[error("degenerate sample: all {draws} generic draws gave a singular basis change (re-seed advised)")]
    DegenerateSample { draws: usize },

    #[error("refused: {0}")]
    ComplexityGuard(String),

    #[error("json: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
