//! Coordinate rings of the catalog varieties with exact rational
//! coefficients and canonical normal forms.

mod basis;
mod element;
mod lines;
mod monomial;
mod presentation;
pub mod univariate;

pub use basis::{truncated_basis, truncated_basis_weighted, TruncatedBasis, Window};
pub use element::RingElement;
pub use monomial::Monomial;
pub use presentation::{make_ring, Relation, Ring, RingKind, RingPresentation, Terms};
pub(crate) use presentation::rational_string;

#[cfg(test)]
mod tests;
