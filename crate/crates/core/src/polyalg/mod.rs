//! Exact arithmetic: rationals, multivariate polynomials, dense rational
//! linear algebra and a phase-1 feasibility simplex.

pub mod matrix;
pub mod poly;
pub mod rational;
pub mod simplex;

pub use matrix::{kernel_basis, RationalMatrix};
pub use poly::{graded_lex_cmp, poly_eval, Exponent, MultiPoly, PolyTerm};
pub use rational::{
    format_rational, parse_rational, rat, ratio, rational_to_f64, serde_rational,
    serde_rational_opt, serde_rational_vec, Rational, Scalar,
};
pub use simplex::{positive_kernel_point, primitive_integer, primitive_positive};
