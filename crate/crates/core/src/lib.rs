//! Exact computations with algebraic differential forms and divergence-free
//! vector fields on a catalog of smooth complex affine varieties.

pub mod cli;
pub mod cohomology;
pub mod descriptor;
pub mod error;
pub mod fields;
pub mod identities;
pub mod liealg;
pub mod exterior;
pub mod linalg;
pub mod parse;
pub mod random;
pub mod rings;
pub mod slspan;

pub use error::{Error, Result};

/// Exact rational scalars.
pub type Rational = num::BigRational;

pub(crate) fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

#[cfg(test)]
pub(crate) mod testing;
