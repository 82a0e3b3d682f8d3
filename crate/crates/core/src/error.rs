//! Crate-wide error type.

/// Errors produced by construction, validation and I/O routines.
///
/// Numerical routines themselves are total on valid inputs; everything that
/// can reject does so before any expensive work starts.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Grid resolution must be an even integer `>= 4`.
    #[error("grid resolution must be an even integer >= 4, got {0}")]
    InvalidGridSize(usize),

    /// Two fields that must share a grid do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A physical or numerical parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An exponent lies outside the stated validity range of an inequality
    /// or norm definition.
    #[error("exponent out of range: {0}")]
    ExponentOutOfRange(String),

    /// Input data is malformed (wrong length, inconsistent shape, ...).
    #[error("invalid data: {0}")]
    InvalidData(String),

    /// A snapshot or checkpoint file violates the on-disk format.
    #[error("snapshot format: {0}")]
    SnapshotFormat(String),

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Shorthand for an [`Error::InvalidParameter`] with a formatted message.
    pub fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
