//! Cohomology models: flag varieties with optional projective fibers, and a
//! ring given by explicit generators and relations.

mod explicit;
mod flag;
mod tower;

use num_traits::One;

pub use explicit::{ExplicitRingModel, ModuleBasisElement, RewriteRule};
pub use flag::FlagFactor;
pub use tower::{FiberSpec, TowerModel};

use crate::exactmath::BigRat;
use crate::weights::{Poly, PolyRing, WeightsError};
use crate::weylflag::WeylError;

/// Errors raised by the cohomology models.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpaceError {
    #[error("model definition error: {0}")]
    Model(String),
    #[error("convention error: {0}")]
    Convention(String),
    #[error("polynomial is not Levi-invariant: {0}")]
    NotInvariant(String),
    #[error("integrality violation: {0}")]
    Integrality(String),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Weights(#[from] WeightsError),
}

/// An integral homology basis element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum HomologyClass {
    /// Schubert class of a coset representative times the fiber class of
    /// the given dimension.
    Schubert { rep: usize, fiber: usize },
    /// Class dual to a module basis element of an explicit model.
    Explicit { index: usize },
}

/// Either cohomology backend behind one interface.
#[derive(Debug, Clone)]
pub enum CohomologyModel {
    Tower(TowerModel),
    Explicit(ExplicitRingModel),
}

impl CohomologyModel {
    pub fn ring(&self) -> &PolyRing {
        match self {
            CohomologyModel::Tower(m) => m.ring(),
            CohomologyModel::Explicit(m) => m.ring(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            CohomologyModel::Tower(m) => m.dim(),
            CohomologyModel::Explicit(m) => m.dim(),
        }
    }

    pub fn pure_vars(&self) -> &[usize] {
        match self {
            CohomologyModel::Tower(m) => m.pure_vars(),
            CohomologyModel::Explicit(m) => m.pure_vars(),
        }
    }

    pub fn normal_form(&self, x: &Poly) -> Result<Poly, SpaceError> {
        match self {
            CohomologyModel::Tower(m) => Ok(m.normal_form(x)),
            CohomologyModel::Explicit(m) => m.normal_form(x),
        }
    }

    pub fn homology_basis(&self, k: usize) -> Vec<HomologyClass> {
        match self {
            CohomologyModel::Tower(m) => m.homology_basis(k),
            CohomologyModel::Explicit(m) => m.homology_basis(k),
        }
    }

    pub fn pair(&self, x: &Poly, class: &HomologyClass) -> Result<BigRat, SpaceError> {
        match self {
            CohomologyModel::Tower(m) => m.pair(x, class),
            CohomologyModel::Explicit(m) => m.pair(x, class),
        }
    }

    /// Pairs against every basis class of degree `k`.
    pub fn pair_with_basis(&self, x: &Poly, k: usize) -> Result<Vec<(HomologyClass, BigRat)>, SpaceError> {
        self.homology_basis(k).into_iter().map(|c| self.pair(x, &c).map(|v| (c, v))).collect()
    }

    pub fn fundamental_class_pairing(&self, x: &Poly) -> Result<BigRat, SpaceError> {
        match self {
            CohomologyModel::Tower(m) => m.fundamental_class_pairing(x),
            CohomologyModel::Explicit(m) => m.fundamental_class_pairing(x),
        }
    }

    pub fn class_label(&self, class: &HomologyClass) -> String {
        match (self, class) {
            (CohomologyModel::Explicit(m), c) => m.label(c),
            (CohomologyModel::Tower(m), HomologyClass::Schubert { rep, fiber }) => {
                let w = &m.base().reps()[*rep];
                let word: Vec<String> = w.word().iter().map(|i| (i + 1).to_string()).collect();
                format!("e[{}]*P{}", word.join(""), fiber)
            }
            (_, c) => format!("{c:?}"),
        }
    }

    /// Ranks of the homology groups in complex degrees 0..=dim.
    pub fn betti(&self) -> Vec<usize> {
        (0..=self.dim()).map(|k| self.homology_basis(k).len()).collect()
    }
}

/// Degree together with the pairing matrix of that degree.
pub type PairingBlock = (usize, Vec<Vec<BigRat>>);

/// A list of classes with rational prefactors that is claimed to be a ℤ-basis
/// of cohomology; used to compare hand-picked bases with Schubert bases.
#[derive(Debug, Clone)]
pub struct IntegralBasisSpec {
    pub elements: Vec<(Poly, String, BigRat)>,
}

impl IntegralBasisSpec {
    pub fn new(elements: Vec<(Poly, String)>) -> Self {
        IntegralBasisSpec { elements: elements.into_iter().map(|(p, l)| (p, l, BigRat::one())).collect() }
    }

    pub fn with_prefactors(elements: Vec<(Poly, String, BigRat)>) -> Self {
        IntegralBasisSpec { elements }
    }

    /// Matrix of pairings of the basis elements against the homology basis
    /// of complementary degree, grouped by degree. Each square block must be
    /// unimodular for the elements to form a ℤ-basis.
    pub fn pairing_blocks(&self, model: &CohomologyModel) -> Result<Vec<PairingBlock>, SpaceError> {
        let weights = model.ring().weights().to_vec();
        let mut blocks = Vec::new();
        for k in 0..=model.dim() {
            let elems: Vec<&(Poly, String, BigRat)> =
                self.elements.iter().filter(|(p, _, _)| p.degree(&weights) == Some(k as u32)).collect();
            if elems.is_empty() {
                continue;
            }
            let classes = model.homology_basis(k);
            let mut rows = Vec::new();
            for (p, _, f) in elems {
                let mut row = Vec::new();
                for c in &classes {
                    row.push(model.pair(&p.scale(f), c)?);
                }
                rows.push(row);
            }
            blocks.push((k, rows));
        }
        Ok(blocks)
    }
}
