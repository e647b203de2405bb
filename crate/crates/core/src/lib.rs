//! Exact arithmetic for orbifold curves on the projective line and the
//! machinery around them: abc triples and their conductors, Belyi maps and
//! orbifold pullbacks, genus and freeness checks for towers of double covers,
//! and local solvability of Châtelet surfaces.
//!
//! Everything is computed over the rationals with arbitrary-precision
//! integers. Floating point only appears in reported logarithms and qualities.

pub mod abc;
pub mod arith;
pub mod beauville;
pub mod belyi;
pub mod chatelet;
mod error;
pub mod form;
pub mod orbifold;
pub mod parse;
pub mod poly;
pub mod proj_line;

pub use error::{Error, Result};
pub use proj_line::{Intersection, PrimeForm, ProjPoint};
