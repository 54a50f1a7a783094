//! Error type shared by all simulator modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("dimension {dim} exceeds the configured maximum {max}")]
    DimensionGuard { dim: usize, max: usize },

    #[error("non-finite entry at index {0}")]
    NonFinite(usize),

    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,

    #[error("radix must be at least 2, got {0}")]
    RadixTooSmall(usize),

    #[error("digit {digit} out of range for radix {radix}")]
    DigitOutOfRange { digit: usize, radix: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("state not normalized: |sum of squared moduli - 1| = {0:.3e}")]
    NotNormalized(f64),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("promise violated: function is neither constant nor balanced")]
    PromiseViolated,

    #[error("exact counting guard: table size {0} exceeds 20")]
    CountGuard(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
