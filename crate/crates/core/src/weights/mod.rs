//! Character lattices of maximal tori and the polynomial rings built on them.

mod chars;
mod poly;
mod ring;

pub use chars::{validate_lattice, CharBasis, CharVec, LatticeTag};
pub use poly::{Mono, Poly, PolyDisplay};
pub use ring::{monomials_of_degree, PolyRing};

/// Errors raised when building characters.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeightsError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("characters belong to different bases")]
    BasisMismatch,
    #[error("relations are linearly dependent")]
    DependentRelations,
}
