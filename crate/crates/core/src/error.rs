//! Crate-wide error type.

/// Errors reported by copulakit operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A distribution or family parameter violates its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The requested copula has no density on the unit square.
    #[error("no density: {0}")]
    NoDensity(String),

    /// An iterative routine exhausted its budget before reaching tolerance.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// Input data is unusable (NaN entries, too few observations, ...).
    #[error("invalid data: {0}")]
    InvalidData(String),

    /// A sample statistic has no information for the requested estimate.
    #[error("degenerate sample: {0}")]
    Degenerate(String),

    /// A method-of-moments inversion was asked to map a sample statistic
    /// that the target family cannot produce.
    #[error("estimate out of range: {0}")]
    OutOfRange(String),

    /// A textual specification (copula or margin grammar) failed to parse.
    #[error("parse error: {0}")]
    Parse(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
