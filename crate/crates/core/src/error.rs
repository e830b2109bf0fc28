use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{a} is not invertible modulo {c}")]
    NotInvertible { a: i64, c: u64 },

    #[error("modulus {c} does not divide the character modulus {q}")]
    ModulusMismatch { c: u64, q: u64 },

    #[error("log-gamma has a pole at the nonpositive integer {0}")]
    PoleAtNonpositiveInteger(i64),

    #[error("evaluation point is at the pole s = 1")]
    PoleAtOne,

    #[error("argument must be positive, got {0}")]
    NonPositiveArgument(f64),

    #[error("term with n + x = 0 at n = {n} has a nonzero character value")]
    TermAtZero { n: i64 },

    #[error("contour passes through the pole of the twisted zeta function (c = q = {0})")]
    PoleOnPath(u64),

    #[error("invalid character: {0}")]
    InvalidCharacter(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
