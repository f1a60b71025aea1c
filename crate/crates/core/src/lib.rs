//! Exact counting toolbox: quasi-polynomials, Presburger formulas, lattice points
//! and numerical semigroups.

pub mod arith;
pub mod cooper;
pub mod error;
pub mod eval;
pub mod fit;
pub mod formula;
pub mod frobenius;
pub mod geometry;
pub mod qpoly;

pub use error::{Error, Result};
