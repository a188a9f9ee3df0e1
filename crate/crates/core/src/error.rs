//! Error types for the symbol calculus.

use thiserror::Error;

/// Errors raised by symbol-level operations.
///
/// Structural misuse (mixing symbols of different half-dimension, exponent
/// vectors of the wrong length) panics instead: those are programmer errors
/// and every public constructor documents its dimension contract. The
/// variants here are data-dependent failures that a caller can trigger with
/// well-formed input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The geometric development of 1/(s - P) needs ord(P) <= 0.
    #[error("operation requires a symbol of order <= 0, got order {0}")]
    PositiveOrder(i64),

    /// Input does not satisfy val_t(f_j) >= j - m for some level j > m.
    #[error("filtration violation at level {level}: t-valuation {val_t} < {required}")]
    FiltrationViolation {
        level: i64,
        val_t: usize,
        required: usize,
    },

    /// Affine substitution got a non-invertible matrix.
    #[error("affine substitution matrix is singular")]
    SingularMatrix,

    /// A coefficient mentions a parameter the evaluation did not assign.
    #[error("parameter #{0} has no assigned value")]
    UnassignedParameter(usize),

    /// Gevrey fitting needs at least one level.
    #[error("empty coefficient window")]
    EmptyWindow,
}

pub type Result<T> = std::result::Result<T, Error>;
