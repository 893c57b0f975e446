use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point coordinate {index} must be strictly positive, got {value}")]
    NonPositivePoint { index: usize, value: f64 },

    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("negative coefficient {0} is not allowed")]
    NegativeCoefficient(String),

    #[error("negative exponent {0} is not allowed")]
    NegativeExponent(i64),

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: u32, right: u32 },

    #[error("target degree {requested} is smaller than polynomial degree {degree}")]
    DegreeTooSmall { requested: u32, degree: u32 },

    #[error("{what} exceeds the supported limit {limit} (got {found})")]
    TooLarge {
        what: &'static str,
        limit: usize,
        found: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty support set")]
    EmptySupport,

    #[error(
        "solver did not converge after {iterations} iterations (gradient norm {gradient_norm:e}, objective {objective})"
    )]
    NonConvergence {
        iterations: usize,
        gradient_norm: f64,
        objective: f64,
    },

    #[error("matrix row {0} is zero")]
    ZeroRow(usize),

    #[error("matrix has no perfect matching on its positive pattern (unmatched row {row})")]
    NoPerfectMatching { row: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
