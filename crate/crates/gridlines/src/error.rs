use thiserror::Error;

/// Errors surfaced by the library.
///
/// Violations of internal invariants (an odd sum where the pairing argument
/// guarantees evenness, a negative count) are bugs, not user errors, and
/// panic instead.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid argument or unsatisfied precondition.
    #[error("{0}")]
    Usage(String),
    /// A brute-force census refused to run because it would exceed its cap.
    #[error("{0}")]
    Resource(String),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
