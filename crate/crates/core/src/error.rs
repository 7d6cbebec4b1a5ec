use thiserror::Error;

/// Errors raised by the algebra kernel and the pipelines built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("modulus is not irreducible of the requested degree: {0}")]
    ReducibleModulus(String),
    #[error("field too large: q = {0} exceeds the table limit")]
    FieldTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero divisor: {0}")]
    ZeroDivisor(String),
    #[error("series grids differ: {0} vs {1}")]
    GridMismatch(i64, i64),
    #[error("precision shortfall: {0}")]
    PrecisionShortfall(String),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("reduction failed: {0}")]
    Reduction(String),
    #[error("coefficients do not descend to the base field: {0}")]
    NonDescent(String),
    #[error("bound violation: {0}")]
    BoundViolation(String),
}

impl Error {
    /// Stable taxonomy name used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse_error",
            Error::NotPrime(_) => "not_prime",
            Error::ReducibleModulus(_) => "reducible_modulus",
            Error::FieldTooLarge(_) => "field_too_large",
            Error::DivisionByZero => "division_by_zero",
            Error::ZeroDivisor(_) => "zero_divisor",
            Error::GridMismatch(_, _) => "grid_mismatch",
            Error::PrecisionShortfall(_) => "precision_shortfall",
            Error::SingularMatrix => "singular_matrix",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Reduction(_) => "reduction_failure",
            Error::NonDescent(_) => "non_descent",
            Error::BoundViolation(_) => "bound_violation",
        }
    }

    /// True for errors that signal a failed verification rather than bad input.
    pub fn is_verification_failure(&self) -> bool {
        matches!(
            self,
            Error::PrecisionShortfall(_)
                | Error::Reduction(_)
                | Error::NonDescent(_)
                | Error::BoundViolation(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
