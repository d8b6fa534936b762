//! Exact computation of divisibility bounds for stabilisers of regular
//! sections of equivariant vector bundles on (quasi-)homogeneous varieties.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactmath`]: rationals, exact linear solving, Smith normal form,
//!   factorisations;
//! * [`weights`]: character lattices and the sparse polynomial type used
//!   for every cohomology class;
//! * [`weylflag`]: root data, Weyl groups, divided-difference operators
//!   and Schubert pairings;
//! * [`spaces`]: cohomology models of the varieties (flag products,
//!   projective bundles over flag varieties, explicit presentations);
//! * [`charclasses`]: jet-bundle Euler classes and Chern class algebra;
//! * [`boundengine`]: ideal decomposition, S-matrices, cokernels and the
//!   final bound assembly;
//! * [`catalog`]: declarative case descriptions and the built-in case set.

pub mod boundengine;
pub mod catalog;
pub mod charclasses;
pub mod exactmath;
pub mod spaces;
pub mod weights;
pub mod weylflag;

pub use boundengine::{BoundReport, GroupData};
pub use exactmath::{BigRat, Factored, IntMatrix, SnfResult};
pub use weights::{CharBasis, CharVec, Poly, PolyRing};
