use thiserror::Error;

/// Errors raised by the algebra routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime in [2, 2^31)")]
    NotPrime(u64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("degree underflow: operator of degree {operator} applied to element of degree {element}")]
    DegreeUnderflow { operator: u32, element: u32 },

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("no relatively compressed polynomial found after {attempts} attempts")]
    SearchExhausted { attempts: u64 },

    #[error("link degeneracy: {0}")]
    LinkDegeneracy(String),

    #[error("uncertified degree cap at step {step}: {reason}; rerun with --degree-cap {suggested} or larger")]
    UncertifiedCap { step: usize, reason: String, suggested: u32 },

    #[error("not a matrix factorization: {0}")]
    NotMatrixFactorization(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
