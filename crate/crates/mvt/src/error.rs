use std::fmt;

/// Errors produced by the distribution, linear algebra, conditioning and
/// verification routines.
#[derive(Debug, Clone, PartialEq)]
#[non_exhaustive]
pub enum Error {
    /// A matrix required to be symmetric is asymmetric beyond tolerance.
    NotSymmetric,

    /// A Cholesky pivot was zero, negative or non-finite.
    NotPositiveDefinite,

    /// Operand dimensions do not agree.
    DimensionMismatch { expected: usize, got: usize },

    /// A partition's index sets are invalid (out of range, overlapping,
    /// incomplete, or the free block is empty).
    InvalidPartition(String),

    /// A named parameter violates its invariant.
    InvalidParameter { field: &'static str, reason: String },

    /// A JSON parameter document failed to parse.
    Parse(String),

    /// The scaled chi-square density was evaluated outside its support w > 0.
    NonPositiveSupport,

    /// Degrees of freedom are NaN, zero or negative.
    InvalidDof,

    /// The operation requires more than two degrees of freedom.
    DofTooSmall,

    /// A goodness-of-fit statistic was requested for an empty sample.
    EmptySample,

    /// Adaptive quadrature exhausted its panel budget before reaching the
    /// requested tolerance.
    QuadratureNonConvergence,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotSymmetric => write!(f, "matrix is asymmetric beyond tolerance"),
            Error::NotPositiveDefinite => write!(f, "matrix is not positive definite"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::InvalidPartition(reason) => write!(f, "invalid partition: {reason}"),
            Error::InvalidParameter { field, reason } => {
                write!(f, "invalid parameter `{field}`: {reason}")
            }
            Error::Parse(reason) => write!(f, "parse error: {reason}"),
            Error::NonPositiveSupport => {
                write!(f, "density evaluated outside the support w > 0")
            }
            Error::InvalidDof => write!(f, "degrees of freedom must be finite and positive"),
            Error::DofTooSmall => write!(f, "operation requires more than 2 degrees of freedom"),
            Error::EmptySample => write!(f, "sample is empty"),
            Error::QuadratureNonConvergence => {
                write!(f, "quadrature did not converge within the panel budget")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
