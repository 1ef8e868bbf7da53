use thiserror::Error;

/// Every failure mode surfaced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field descriptor mismatch")]
    FieldMismatch,
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("polynomial is not irreducible: {0}")]
    Reducible(String),
    #[error("constant polynomial has no irreducibility status")]
    ConstantPolynomial,
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("leading coefficient must be a nonzero constant (good reduction): {0}")]
    BadReduction(String),
    #[error("local factor is not integral over A: {0}")]
    Integrality(String),
    #[error("search budget exceeded: {0}")]
    Budget(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("certificate failure: {0}")]
    Certificate(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("outside the certified ball: {0}")]
    OutsideBall(String),
}

pub type Result<T> = std::result::Result<T, Error>;
