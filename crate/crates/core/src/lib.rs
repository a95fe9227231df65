//! Numerical toolkit for harmonically s-convex functions: special functions,
//! a quadrature oracle, convexity predicates on sample grids, closed-form
//! Hermite–Hadamard and Ostrowski-type bounds, and a verifier that checks
//! every bound against quadrature.

pub mod bounds;
pub mod cli;
pub mod convexity;
pub mod error;
pub mod numeric;
pub mod output;
pub mod specfn;
pub mod verify;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
