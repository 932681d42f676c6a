use thiserror::Error;

use crate::exact::FieldSpec;

/// Errors raised on malformed input or violated preconditions.
///
/// Mathematical check failures are never errors: they are reported as data
/// (validation issues, fusion violations, axiom witnesses).
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed scalar `{0}`")]
    MalformedScalar(String),

    #[error("denominator of `{text}` vanishes in {field}")]
    ZeroDenominator { text: String, field: FieldSpec },

    #[error("invalid field spec `{spec}`: {reason}")]
    InvalidField { spec: String, reason: String },

    #[error("invalid model spec `{spec}`: {reason}")]
    InvalidModel { spec: String, reason: String },

    #[error("transposition system failed validation ({count} issue(s)); first: {first}")]
    InvalidSystem { count: usize, first: String },

    #[error("eta must avoid 0 and 1, got {0}")]
    DegenerateEta(String),

    #[error("{field} is not of good characteristic relative to (p = {p}, eta = {eta})")]
    BadCharacteristic { p: u64, eta: String, field: FieldSpec },

    #[error("operator {side} multiplication by axis {axis} is not semisimple (deficit {deficit})")]
    NotSemisimple { axis: usize, side: &'static str, deficit: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("indices must be distinct, got ({0}, {0})")]
    SameIndex(usize),

    #[error("vector must be nonzero")]
    ZeroVector,

    #[error("vector has length {got}, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },

    #[error("fusion law values must be pairwise distinct")]
    CoincidentLawValues,

    #[error("invalid fusion law spec `{0}`")]
    InvalidLawSpec(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
