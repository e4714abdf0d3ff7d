use thiserror::Error;

use crate::algebra::Rational;

/// Errors raised by the localization engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series inversion needs a nonzero constant term")]
    ZeroConstantTerm,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unknown class generator `{0}`")]
    UnknownGenerator(String),

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid model{}: {reason}", .id.as_ref().map(|i| format!(" (fixed point `{i}`)")).unwrap_or_default())]
    InvalidModel { id: Option<String>, reason: String },

    #[error("flag is not a lattice basis (determinant {det})")]
    NotUnimodular { det: i128 },

    #[error("stage {stage} of the flag splitting is empty")]
    EmptyStage { stage: usize },

    #[error("unknown fixed point `{0}`")]
    UnknownFixedPoint(String),

    #[error("model carries no root data")]
    NoRootData,

    #[error("{value} is not a regular value of the moment map")]
    NotRegular { value: Rational },

    #[error("invalid plan: {0}")]
    InvalidPlan(String),

    #[error("invalid weighted space: {0}")]
    InvalidSpace(String),

    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
