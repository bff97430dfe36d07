//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Radicand must be >= 2 and not a perfect square.
    #[error("invalid radicand {0}: must be a nonsquare integer >= 2")]
    InvalidRadicand(String),

    /// Binary operation on elements of different quadratic fields.
    #[error("incompatible fields: radicand {0} vs {1}")]
    MismatchedFields(String, String),

    /// A comparison or refinement could not be decided before the
    /// configured precision ceiling.
    #[error("undecidable at precision ceiling {ceiling} bits: {context}")]
    PrecisionCeiling { ceiling: u32, context: String },

    /// Division by an interval containing zero, or by zero.
    #[error("division by a quantity that may be zero")]
    DivisionByZero,

    /// Logarithm of a quantity not certainly positive.
    #[error("logarithm requires a certainly positive argument")]
    NonPositiveLog,

    /// Square root of a quantity that may be negative.
    #[error("square root requires a certainly nonnegative argument")]
    NegativeSqrt,

    #[error("zero value where a nonzero value is required: {0}")]
    ZeroValue(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The two expressions of the linear form evaluate to provably
    /// different reals: the supplied (alpha, beta, m, n) combination does
    /// not come from a common-y decomposition.
    #[error("linear-form expressions disagree: pair is not solution-compatible")]
    FormsDisagree,

    /// An internal invariant that should be a theorem failed; indicates
    /// an arithmetic bug.
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
