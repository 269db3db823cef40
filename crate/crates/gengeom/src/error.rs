//! Error type shared by every module of the crate.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T, E = GeomError> = std::result::Result<T, E>;

/// Everything that can go wrong while building or evaluating geometric data.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("chart mismatch: expected dimension {expected}, found {found}")]
    ChartMismatch { expected: usize, found: usize },

    #[error("invalid chart: {0}")]
    InvalidChart(String),

    #[error("degree mismatch: expected a {expected}-form, found a {found}-form")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("parse error in {field}: {message}")]
    Parse { field: String, message: String },

    #[error("frame determinant is not a nonzero constant (found {0})")]
    NonConstantDeterminant(String),

    #[error("matrix is not invertible over the polynomial ring: {0}")]
    NotInvertible(String),

    #[error("matrix shape mismatch: {0}")]
    Shape(String),

    #[error("diffeomorphism check failed: {0}")]
    InvalidDiffeo(String),

    #[error("three-form is not closed: dH = {0}")]
    NotClosed(String),

    #[error("isomorphism condition violated: {0}")]
    IsoCondition(String),

    #[error("subbundle is not involutive: {0}")]
    NotInvolutive(String),

    #[error("invalid subbundle: {0}")]
    InvalidSubbundle(String),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("rank of the intersection is not constant over the sample plan: {0}")]
    NonConstantRank(String),

    #[error("unknown name: {0}")]
    UnknownName(String),

    #[error("document error: {0}")]
    Document(String),
}

impl GeomError {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        GeomError::Parse {
            field: field.into(),
            message: message.into(),
        }
    }
}
