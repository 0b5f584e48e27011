use thiserror::Error;

use crate::analytic::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the library. Each message names the invariant that failed.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite value: {0} (invariant: complex coordinates must be finite)")]
    NonFinite(String),

    #[error(
        "singular element: {0} (invariant: element must be invertible, |c1*c2 - c3*c4| above singular_tol)"
    )]
    SingularElement(String),

    #[error("invalid algebra parameters: {0}")]
    InvalidParams(String),

    #[error("degenerate line {label}: defining 2x3 system has rank < 2, solution set is a plane")]
    DegenerateLine { label: String },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("singular evaluation: {0} (invariant: divisor magnitude must exceed 1e-300)")]
    EvalSingular(String),

    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),

    #[error("inconclusive classification: {0}")]
    Inconclusive(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
