//! Complex quaternions H(C), G-monogenic mappings on the real span E3,
//! their Taylor/Laurent expansions and the classification of singular points.
//!
//! Elements are stored in the idempotent basis `{e1, e2, e3, e4}`; a mapping is given
//! by four holomorphic component functions, and series coefficients come from
//! trapezoidal contour integration in each component plane.

// negated comparisons below are deliberate: NaN must fail the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod analytic;
pub mod cli;
pub mod error;
pub mod espace;
pub mod monogenic;
pub mod series;
pub mod singularity;

pub use algebra::{resolvent, Biquat, Complex, IjkCoords, NormKind};
pub use analytic::{laurent_coeffs, parse, ComponentFn, Expr, LaurentSeries1D};
pub use error::{Error, Result};
pub use espace::{embed, functionals, singular_lines, AlgebraParams, E3Point, LineLabel, LineR3};
pub use monogenic::{check_monogenic, eval_map, gateaux_derivative, GMonogenicMap, MapSpec, Side};
pub use series::{eval_series, expand, power, split_parts, QuatLaurentSeries};
pub use singularity::{classify, probe_limit, Overall, SingularityReport};
