//! Holomorphic functions of one complex variable: expressions, truncated
//! Laurent series, and coefficient extraction by the trapezoidal rule on circles.

mod expr;
mod laurent;
mod parser;

pub use expr::{Expr, Func, EVAL_SINGULAR_EPS};
pub use laurent::{
    extract, laurent_coeffs, ComponentFn, Extraction, LaurentSeries1D, DEFAULT_NODES, NOISE_REL,
    TRUST_FRACTION,
};
pub use parser::{parse, ParseError, MAX_EXPONENT};
