use thiserror::Error;

use crate::{MAX_ORDER, MAX_VARS};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum KernelError {
    #[error("ring context mismatch")]
    ContextMismatch,
    #[error("characteristic must be 0 or prime, got {0}")]
    BadCharacteristic(u64),
    #[error("too many variables: {0} (max {MAX_VARS})")]
    TooManyVars(usize),
    #[error("truncation order {0} exceeds maximum {MAX_ORDER}")]
    OrderCap(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("truncation target {0} exceeds order {1}")]
    BadTruncation(usize, usize),
    #[error("image {0} is not congruent to its coordinate mod t")]
    InvalidHs(usize),
    #[error("operator order {0} exceeds degree bound {1}")]
    OrderTooHigh(u32, u32),
    #[error("black box is not a differential operator of order <= {0}")]
    NotAnOperator(u32),
    #[error("arity mismatch: expected {0} arguments, got {1}")]
    ArityMismatch(usize, usize),
    #[error("divided powers live on positive degree")]
    ZeroDegreeDividedPower,
    #[error("bracket of two degree-0 elements is undefined")]
    DegenerateBracket,
    #[error("{0}! is not invertible in the coefficient ring")]
    FactorialNotInvertible(usize),
    #[error("desk-scale cap exceeded: {0}")]
    DeskScaleExceeded(String),
    #[error("ideal is not principal")]
    NonPrincipalIdeal,
    #[error("input is not logarithmic with respect to the ideal")]
    NotLogarithmic,
    #[error("coordinate correction does not lie in the ideal")]
    FingerprintMismatch,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid serialized form: {0}")]
    BadSerialization(String),
}

pub type Result<T> = std::result::Result<T, KernelError>;
