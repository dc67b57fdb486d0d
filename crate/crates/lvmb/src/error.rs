use thiserror::Error;

/// Crate-wide error type.
///
/// `BadInput` and `Precondition` describe problems with caller-supplied data;
/// `Internal` flags a cross-check disagreement that should never occur and is
/// surfaced by the CLI as exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed rational: {0}")]
    BadRational(String),

    #[error("invalid input: {0}")]
    BadInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
