use thiserror::Error;

/// Errors raised by kernel operations.
///
/// Undefinedness is *not* an error: operations that can fail to denote
/// return `None` (or [`crate::diff::RealResult::Undefined`]). Errors are
/// reserved for precondition violations and malformed input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative exponent {0}")]
    NegativeExponent(String),
    #[error("not a quotation")]
    NotAQuotation,
    #[error("not a rational expression")]
    NotARationalExpression,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("invalid prime factorization: {0}")]
    InvalidFactorization(String),
    #[error("the Maple list format has no rendering for 0")]
    ZeroSign,
    #[error("invalid number literal {0:?}")]
    InvalidNumber(String),
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("predicate violation: {0}")]
    PredicateViolation(String),
    #[error("invalid JSON term: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, KernelError>;
