use thiserror::Error;

use crate::model::Family;

/// Errors produced by model construction, certification and comparison.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mixture has no components with positive weight")]
    EmptyMixture,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid dimension {0}: must be at least 1")]
    InvalidDimension(usize),

    #[error("covariance of component {0} is not positive definite")]
    NonPositiveDefinite(usize),

    #[error("covariance of component {0} is not symmetric")]
    NotSymmetric(usize),

    #[error("component {0} has a non-finite parameter")]
    NonFinite(usize),

    #[error("component {0} has an invalid weight")]
    InvalidWeight(usize),

    #[error("component {index}: {reason}")]
    InvalidDof { index: usize, reason: &'static str },

    #[error("weights sum to {0}, expected 1")]
    WeightSumMismatch(f64),

    #[error("family mismatch: {left:?} vs {right:?}")]
    FamilyMismatch { left: Family, right: Family },

    #[error("operation not supported for the {0:?} family")]
    UnsupportedFamily(Family),

    #[error("scale must be positive and finite, got {0}")]
    InvalidScale(f64),

    #[error("direction vector is zero")]
    ZeroDirection,

    #[error("integer overflow computing {0}")]
    Overflow(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("exact certification would check {subsets} subsets (limit {limit}); use randomized mode")]
    ExactModeTooLarge { subsets: u128, limit: u128 },

    #[error("need at least {required} directions, got {count}")]
    InsufficientDirections { required: usize, count: usize },

    #[error("no certified direction set after {0} attempts")]
    GenerationFailed(usize),

    #[error("quadrature did not converge (estimate {estimate}, error {error})")]
    QuadratureNonConvergence { estimate: f64, error: f64 },

    #[error("polygon example needs m >= 2, got {0}")]
    InvalidM(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
