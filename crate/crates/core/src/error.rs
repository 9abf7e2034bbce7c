use thiserror::Error;

/// Errors raised by the matrix-set, norm and iteration layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix set is empty")]
    EmptySet,

    #[error("matrix {index} is the zero matrix")]
    ZeroMatrix { index: usize },

    #[error("matrix {index} has a non-finite entry")]
    NonFinite { index: usize },

    #[error("matrix index {index} out of range for a set of {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("node count {0} must be even and at least 8")]
    InvalidNodeCount(usize),

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("max_iters must be at least 1")]
    InvalidMaxIters,

    #[error("averaging arguments must be positive, got ({0}, {1})")]
    NonPositiveArgument(f64, f64),

    #[error("invalid gauge: {0}")]
    InvalidGauge(String),

    #[error("grid mismatch: expected {expected} nodes, got {actual}")]
    GridMismatch { expected: usize, actual: usize },

    #[error("matrix set is reducible: common eigenvector ({0}, {1})")]
    Reducible(f64, f64),

    #[error("product depth must be at least 1")]
    InvalidDepth,

    #[error("{chains} chains exceed the exhaustive cap of {cap}; use sampled mode")]
    CapExceeded { chains: u128, cap: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
