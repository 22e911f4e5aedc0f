use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("indeterminate sum (+inf) + (-inf)")]
    IndeterminateSum,

    #[error("scale factor must be strictly positive, got {0}")]
    BadScale(f64),

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    BadParam {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("flag requirement violated: {0}")]
    FlagViolation(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector must have at least one coordinate")]
    EmptyVector,

    #[error("non-finite coordinate {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("witness point is not in the domain: {0}")]
    NotProper(String),

    #[error("numeric recession requires a witness point in the domain")]
    NoWitness,

    #[error("recession quotient did not stabilize over the alpha schedule (last quotient {last})")]
    NotConverged { last: f64 },

    #[error("missing oracle: {0}")]
    MissingOracle(&'static str),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("witness does not lie in the intersection of the domains")]
    EmptyIntersection,

    #[error("invalid witness for affine composition: {0}")]
    BadWitness(String),

    #[error("function is +inf at every probed point")]
    AllInfinite,

    #[error("invalid weights: {0}")]
    BadWeights(String),

    #[error("sampler could not produce a finite-valued point after {attempts} attempts")]
    SamplerExhausted { attempts: usize },

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("invalid grid: {0}")]
    BadGrid(String),

    #[error("data error: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;
