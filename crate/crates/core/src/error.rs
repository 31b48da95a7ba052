//! Error type shared by the series, Fock, and special-function layers.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("no exact square root of {0}")]
    NoExactSqrt(String),
    #[error("variable mismatch: {0} vs {1}")]
    VarMismatch(String, String),
    #[error("annulus mismatch: cannot multiply an inner expansion by an outer one")]
    AnnulusMismatch,
    #[error("series has no invertible leading term")]
    NonInvertibleLead,
    #[error("divergent evaluation: {0}")]
    Divergent(String),
    #[error("pole or resonance at {0}")]
    Pole(String),
    #[error("zero mode shift must be an integer")]
    NonIntegerCharge,
    #[error("mode index must be nonzero")]
    ZeroMode,
    #[error("unknown operator name: {0}")]
    UnknownOperator(String),
    #[error("partition length {0} exceeds variable count {1}")]
    TooManyParts(usize, usize),
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("inexact polynomial division")]
    InexactDivision,
    #[error("sampling failed after {0} attempts")]
    SamplingFailed(usize),
    #[error("bad configuration: {0}")]
    BadConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
