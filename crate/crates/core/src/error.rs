use num_complex::Complex64;
use thiserror::Error;

/// Coarse failure classes; the command-line front end maps them onto exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Precondition,
    Verification,
    Numeric,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("series variables differ: `{0}` vs `{1}`")]
    VariableMismatch(String, String),

    #[error("division by an identically zero series")]
    DivisionByZero,

    #[error("division by zero scalar")]
    ZeroScalar,

    #[error("exponent {num}/{den} has a denominator other than 1 or 2")]
    ExponentDenominator { num: i64, den: i64 },

    #[error("series valuation precondition violated: {0}")]
    Valuation(String),

    #[error("operation needs a truncated operand: {0}")]
    NeedsTruncation(&'static str),

    #[error("leading coefficient {0} is not a perfect square in Q(sqrt 3)")]
    NotASquare(String),

    #[error("insufficient order: need at least {needed}, got {got}")]
    InsufficientOrder { needed: i64, got: i64 },

    #[error("term x^-1 encountered while integrating; input is corrupted")]
    LogarithmicTerm,

    #[error("root refinement did not converge: {0}")]
    NonConvergence(String),

    #[error("continuation step underflow near s = {s}")]
    StepUnderflow { s: Complex64 },

    #[error("turning point x = 0 has no Stokes region")]
    TurningPoint,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("element is not a unit in the cubic quotient ring")]
    NonUnit,

    #[error("point lies on or near the singular locus (leading coefficient {value:e})")]
    SingularLocus { value: f64 },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("oracle precision insufficient: {0}")]
    Precision(String),

    #[error("verification failed: {0}")]
    Verification(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NonConvergence(_)
            | Error::StepUnderflow { .. }
            | Error::Quadrature(_)
            | Error::Precision(_) => ErrorClass::Numeric,
            Error::Verification(_) => ErrorClass::Verification,
            _ => ErrorClass::Precondition,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
