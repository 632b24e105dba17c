//! Exact toric blending functions, strict linear precision, Horn matrices,
//! maximum-likelihood estimation for scaled toric models, and toric moment maps.

pub mod catalog;
pub mod error;
pub mod io;
pub mod moment;
pub mod polyalg;
pub mod polytope;
pub mod precision;
pub mod sampling;
pub mod search;
pub mod statistics;

pub use error::{Error, Result};
