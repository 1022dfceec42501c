use thiserror::Error;

/// Errors raised by the arithmetic, box and counting layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Parameters that fail validation (non-prime p, reducible modulus, ...).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A value outside the domain of an operation, e.g. inverting zero.
    #[error("domain error: {0}")]
    Domain(String),

    /// Division that was required to be exact left a remainder.
    #[error("inexact division: {0}")]
    InexactDivision(String),

    /// A polynomial referenced a variable that has no weight or assignment.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// Structural validation of a box, table or instance failed.
    #[error("validation error: {0}")]
    Validation(String),

    /// Lengths, variable sets or precisions of two operands disagree.
    #[error("usage error: {0}")]
    Usage(String),

    /// A computation would exceed its configured work budget.
    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    /// Malformed polynomial or literal text.
    #[error("parse error at column {column}: {reason}")]
    Parse { column: usize, reason: String },
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "invalid_params",
            Error::Domain(_) => "domain",
            Error::InexactDivision(_) => "inexact_division",
            Error::Configuration(_) => "configuration",
            Error::Validation(_) => "validation",
            Error::Usage(_) => "usage",
            Error::BudgetExceeded { .. } => "budget",
            Error::Parse { .. } => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
