//! Crate-wide error type.
//!
//! Structured variants carry enough location data (an index, a series order,
//! a basis label) for callers to render a useful diagnostic; the CLI maps
//! [`Error::Parse`] and friends to exit code 2 and failed mathematical
//! checks to exit code 1.

use thiserror::Error;

/// Errors produced by constructors and operations.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed textual input (scalar strings, JSON instance files).
    #[error("parse error: {0}")]
    Parse(String),

    /// Two objects live over different ambient spaces or rings.
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),

    /// A matrix or basis has the wrong shape for the requested operation.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A map required to be nilpotent is not.
    #[error("matrix is not nilpotent{}", fmt_ctx(.0))]
    NotNilpotent(String),

    /// A family of maps required to commute does not.
    #[error("maps do not commute: {0}")]
    NonCommuting(String),

    /// Division by a non-invertible series or coefficient.
    #[error("not a unit: {0}")]
    NotAUnit(String),

    /// A linear solve had no solution.
    #[error("inconsistent linear system: {0}")]
    Inconsistent(String),

    /// Input fails the structural requirements of a graded Frobenius module.
    #[error("invalid module data: {0}")]
    InvalidModule(String),

    /// Input fails the structural requirements of a mixed Hodge structure.
    #[error("invalid Hodge data: {0}")]
    InvalidHodge(String),

    /// A degree-by-degree solve hit an obstruction.
    #[error("obstruction at order {order}: {detail}")]
    Obstruction { order: u32, detail: String },

    /// A requested filtration provably does not exist.
    #[error("does not exist: {0}")]
    DoesNotExist(String),

    /// A precondition documented on the operation is violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Unsupported combination of parameters (e.g. weight out of range).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Underlying I/O failure (CLI file handling).
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

fn fmt_ctx(s: &str) -> String {
    if s.is_empty() {
        String::new()
    } else {
        format!(": {s}")
    }
}
