use thiserror::Error;

/// Errors shared by the weight calculus, the lattice engine and the
/// exponent estimators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty vector where at least one coordinate is required")]
    EmptyVector,

    #[error("weights must be strictly positive and finite, got {0}")]
    NonPositiveWeight(f64),

    #[error("matrix entries must be finite")]
    NonFiniteEntry,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("total dimension m + n must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("geometric mean of the lambda block must be at least 1, got {0}")]
    ProductBelowOne(f64),

    #[error("scale parameter must exceed 1, got {0}")]
    DegenerateScale(f64),

    #[error("truncation depth {p} must be smaller than m = {m}")]
    TruncationTooDeep { p: usize, m: usize },

    #[error("all lambda entries are at least 1; nothing to truncate")]
    TrivialBranch,

    #[error("enumeration volume {volume:.3e} exceeds cap {cap}")]
    CapExceeded { volume: f64, cap: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
