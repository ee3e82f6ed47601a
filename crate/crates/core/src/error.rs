use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidSpec(String),

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    /// A computation would exceed a configured resource cap.
    #[error("{what} too large ({actual} > limit {limit})")]
    TooLarge {
        what: &'static str,
        actual: u128,
        limit: u128,
    },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// Labeled states in one symmetry class received different polynomials.
    #[error("class well-definedness violated: {0}")]
    ClassMismatch(String),

    #[error("value out of computed range: {0}")]
    OutOfRange(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
