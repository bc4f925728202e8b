use thiserror::Error;

/// Errors produced by the exact and numeric layers.
///
/// `IdentityViolation` and `InternalInconsistency` indicate that an exact
/// identity the construction relies on failed to hold; they should never
/// fire for valid inputs and map to a distinct process exit code in the CLI.
#[derive(Debug, Error)]
pub enum HeunError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate scale: {0}")]
    DegenerateScale(String),
    #[error("invalid target index: {0}")]
    InvalidTarget(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("identity violation: {0}")]
    IdentityViolation(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

pub type Result<T> = std::result::Result<T, HeunError>;
