use thiserror::Error;

/// Errors raised by the arithmetic and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A parameter violated a documented precondition.
    #[error("{0}")]
    InvalidParameter(String),
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    /// A rational with `p` in its denominator cannot be reduced modulo `p^a`.
    #[error("{value} is not {p}-integral")]
    NotIntegral { value: String, p: u64 },
    #[error("p-adic valuation of zero is undefined")]
    ValuationOfZero,
    #[error("polynomial ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    /// The reduced rational function still has a pole at `t = 0`.
    #[error("rational function has a pole at t = 0")]
    PoleAtZero,
    #[error("residue expansion did not stabilize (last cap {cap})")]
    NotStabilized { cap: usize },
    #[error("{value} is not a unit modulo {modulus}")]
    NonUnit { value: String, modulus: String },
    #[error("point {0} lies outside the convergence domain")]
    DomainViolation(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
