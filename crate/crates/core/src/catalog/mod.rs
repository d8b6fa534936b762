//! Declarative case descriptions, the built-in case set and the runner
//! that turns a case into a [`BoundReport`].
//!
//! Cases are written in TOML; the built-in set is embedded at compile time
//! and user files with the same schema can be loaded at run time.

use std::collections::HashSet;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::boundengine::{
    assemble_bound, degree_blocks, hypersurface_bound, quadric_hypersurface_bound, AssemblyInput, BoundError,
    BoundReport, DegreeBlock, GroupData, PivotOrder, Transform,
};
use crate::charclasses::{chern_number, jet_euler, CharClassError, LineBundleSpec, QuinticDerivation};
use crate::exactmath::{to_integer, BigRat, Factored, MathError};
use crate::spaces::{CohomologyModel, FiberSpec, FlagFactor, SpaceError, TowerModel};
use crate::weights::Poly;

const BUILTIN: &str = include_str!("cases.toml");

/// Errors from loading or running cases.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("cannot parse case file: {0}")]
    Parse(String),
    #[error("invalid case {id}: {reason}")]
    Invalid { id: String, reason: String },
    #[error("duplicate case id {0}")]
    Duplicate(String),
    #[error("unknown case {0}")]
    UnknownCase(String),
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("case {id}: {source}")]
    Run { id: String, source: BoundError },
}

/// Which pipeline computes the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pipeline {
    /// A flag variety, possibly with a Cayley fiber.
    Homogeneous,
    /// A projective bundle resolving a cone.
    Cone,
    /// A hand-written presentation of the equivariant cohomology ring.
    Explicit,
    /// A closed formula, no S-matrices.
    Formula,
}

/// Homogeneous space G/P.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceSpec {
    Lagrangian { n: usize },
    Spinor { n: usize },
    G2,
    Grassmannian {
        k: usize,
        n: usize,
        #[serde(default)]
        special: bool,
    },
    OddQuadric { n: usize },
}

impl SpaceSpec {
    pub fn build(&self) -> Result<FlagFactor, SpaceError> {
        match *self {
            SpaceSpec::Lagrangian { n } => FlagFactor::lagrangian(n),
            SpaceSpec::Spinor { n } => FlagFactor::spinor(n),
            SpaceSpec::G2 => FlagFactor::g2(),
            SpaceSpec::Grassmannian { k, n, special } => {
                if k == 0 || k >= n {
                    return Err(SpaceError::Model(format!("Gr({k},{n}) needs 0 < k < n")));
                }
                FlagFactor::grassmannian(k, n, special)
            }
            SpaceSpec::OddQuadric { n } => {
                if n < 2 {
                    return Err(SpaceError::Model("odd quadric needs rank at least 2".into()));
                }
                FlagFactor::odd_quadric(n)
            }
        }
    }
}

/// What sits over the homogeneous space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FiberDescriptor {
    Point,
    Cayley {
        rank: usize,
        #[serde(default)]
        special: bool,
    },
    /// ℙ(ℰ) with c₁ᴳ(ℰ) = zeta·ζ + χ, χ given in the coordinates of the
    /// base character basis.
    Bundle { zeta: i64, chi: Vec<i64> },
}

impl FiberDescriptor {
    fn build(&self, base: &FlagFactor) -> Result<FiberSpec, SpaceError> {
        Ok(match self {
            FiberDescriptor::Point => FiberSpec::Point,
            FiberDescriptor::Cayley { rank, special } => {
                if *rank == 0 {
                    return Err(SpaceError::Model("Cayley fiber needs positive rank".into()));
                }
                FiberSpec::Cayley { rank: *rank, special: *special }
            }
            FiberDescriptor::Bundle { zeta, chi } => {
                if chi.len() != base.basis().len() {
                    return Err(SpaceError::Model(format!(
                        "chi has {} coordinates, the base has {} characters",
                        chi.len(),
                        base.basis().len()
                    )));
                }
                FiberSpec::Bundle { zeta: *zeta, chi: base.basis().from_ints(chi) }
            }
        })
    }
}

/// A generator of H*(BG) and its primitive scale, written as a fraction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    #[serde(default = "one_text")]
    pub kappa: String,
}

fn one_text() -> String {
    "1".into()
}

/// Ring presentations available to the explicit pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ExplicitSpec {
    /// The quintic del Pezzo threefold, from the Whitney datum
    /// c(Sym⁴ℂ²) = 1 + m·s₂ + k·s₂².
    Quintic { m: i64, k: i64 },
}

/// Closed formulas.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FormulaSpec {
    /// Degree d hypersurfaces in ℙⁿ.
    Hypersurface { n: u32, d: u32 },
    /// Degree d sections of a smooth k-dimensional quadric.
    Quadric { k: u32, d: u32 },
}

impl FormulaSpec {
    pub fn evaluate(&self) -> Result<BigUint, BoundError> {
        match *self {
            FormulaSpec::Hypersurface { n, d } => hypersurface_bound(n, d),
            FormulaSpec::Quadric { k, d } => quadric_hypersurface_bound(k, d),
        }
    }
}

/// Why the space of regular sections is affine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Affinity {
    /// Checked at run time: the top Chern number of J(L) is nonzero.
    ChernNonzero,
    /// Taken from the geometry of the case and not checked.
    Geometric,
}

/// How much of the expected value is backed by a full derivation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Confidence {
    #[default]
    Derived,
    /// Only the final value is known; no intermediates are pinned.
    Cited,
}

/// Intermediate values a case must reproduce.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pinned {
    #[serde(default)]
    pub cokernels: Option<Vec<u64>>,
    /// Expected |⟨c_d(J(L)), [X]⟩|.
    #[serde(default)]
    pub chern: Option<u64>,
}

/// One case as written in a case file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseSpec {
    pub id: String,
    pub pipeline: Pipeline,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub space: Option<SpaceSpec>,
    #[serde(default)]
    pub fiber: Option<FiberDescriptor>,
    #[serde(default)]
    pub twist: Option<i64>,
    #[serde(default)]
    pub explicit: Option<ExplicitSpec>,
    #[serde(default)]
    pub formula: Option<FormulaSpec>,
    #[serde(default)]
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub transforms: Vec<Transform>,
    pub affinity: Affinity,
    pub expected: String,
    #[serde(default)]
    pub confidence: Confidence,
    #[serde(default)]
    pub pinned: Option<Pinned>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CaseFile {
    #[serde(default, rename = "case")]
    cases: Vec<CaseSpec>,
}

impl CaseSpec {
    fn invalid(&self, reason: impl Into<String>) -> CatalogError {
        CatalogError::Invalid { id: self.id.clone(), reason: reason.into() }
    }

    pub fn expected_bound(&self) -> Result<Factored, CatalogError> {
        self.expected.parse().map_err(|e: crate::exactmath::ParseFactoredError| self.invalid(e.to_string()))
    }

    /// Order of the center quotient, read from the transform chain.
    pub fn center(&self) -> u64 {
        self.transforms
            .iter()
            .find_map(|t| match t {
                Transform::Center(n) => Some(*n),
                _ => None,
            })
            .unwrap_or(1)
    }

    /// Parsed primitive scales.
    pub fn generator_scales(&self) -> Result<Vec<(String, BigRat)>, CatalogError> {
        self.generators
            .iter()
            .map(|g| {
                g.kappa
                    .trim()
                    .parse::<BigRat>()
                    .map(|k| (g.name.clone(), k))
                    .map_err(|_| self.invalid(format!("generator {}: bad scale {:?}", g.name, g.kappa)))
            })
            .collect()
    }

    /// Checks that the fields required by the pipeline are present and the
    /// transform chain is legal for it.
    pub fn validate(&self) -> Result<(), CatalogError> {
        if self.id.trim().is_empty() {
            return Err(self.invalid("empty id"));
        }
        self.expected_bound()?;
        self.generator_scales()?;
        let has = |t: fn(&Transform) -> bool| self.transforms.iter().any(t);
        let centers = self.transforms.iter().filter(|t| matches!(t, Transform::Center(_))).count();
        if centers > 1 {
            return Err(self.invalid("at most one center quotient"));
        }
        match self.pipeline {
            Pipeline::Homogeneous | Pipeline::Cone => {
                if self.space.is_none() || self.fiber.is_none() || self.twist.is_none() {
                    return Err(self.invalid("space, fiber and twist are required"));
                }
                let is_bundle = matches!(self.fiber, Some(FiberDescriptor::Bundle { .. }));
                if is_bundle != (self.pipeline == Pipeline::Cone) {
                    return Err(self.invalid("bundle fibers belong to the cone pipeline and only there"));
                }
                if self.pipeline == Pipeline::Homogeneous && has(|t| *t == Transform::ExtendedFirstDegree) {
                    return Err(self.invalid("extended_first_degree applies to cone cases"));
                }
            }
            Pipeline::Explicit => {
                if self.explicit.is_none() {
                    return Err(self.invalid("explicit pipeline needs an `explicit` table"));
                }
                if has(|t| *t == Transform::ExtendedFirstDegree) {
                    return Err(self.invalid("extended_first_degree applies to cone cases"));
                }
            }
            Pipeline::Formula => {
                if self.formula.is_none() {
                    return Err(self.invalid("formula pipeline needs a `formula` table"));
                }
                if has(|t| matches!(t, Transform::ChernFactor | Transform::ExtendedFirstDegree)) {
                    return Err(self.invalid("formula cases allow only center and deck transforms"));
                }
            }
        }
        if self.pipeline != Pipeline::Formula && self.generators.is_empty() {
            return Err(self.invalid("no group generators"));
        }
        if self.confidence == Confidence::Cited && self.pinned.is_some() {
            return Err(self.invalid("cited cases carry no pinned intermediates"));
        }
        Ok(())
    }
}

/// Parses and validates a case file.
pub fn parse_cases(text: &str) -> Result<Vec<CaseSpec>, CatalogError> {
    let file: CaseFile = toml::from_str(text).map_err(|e| CatalogError::Parse(e.to_string()))?;
    let mut seen = HashSet::new();
    for c in &file.cases {
        c.validate()?;
        if !seen.insert(c.id.clone()) {
            return Err(CatalogError::Duplicate(c.id.clone()));
        }
    }
    Ok(file.cases)
}

/// Reads a case file from disk.
pub fn load_cases(path: &Path) -> Result<Vec<CaseSpec>, CatalogError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CatalogError::Io { path: path.display().to_string(), reason: e.to_string() })?;
    parse_cases(&text)
}

/// The built-in cases in file order.
pub fn builtin_cases() -> &'static [CaseSpec] {
    static CASES: OnceLock<Vec<CaseSpec>> = OnceLock::new();
    CASES.get_or_init(|| parse_cases(BUILTIN).expect("built-in case file is valid"))
}

/// The built-in cases, cloned.
pub fn list_cases() -> Vec<CaseSpec> {
    builtin_cases().to_vec()
}

pub fn find_case<'a>(cases: &'a [CaseSpec], id: &str) -> Result<&'a CaseSpec, CatalogError> {
    cases.iter().find(|c| c.id == id).ok_or_else(|| CatalogError::UnknownCase(id.to_string()))
}

/// Runs a built-in case by id.
pub fn run_case(id: &str) -> Result<BoundReport, CatalogError> {
    run_spec(find_case(builtin_cases(), id)?)
}

/// Everything the pipelines compute before S-matrices: the model, the
/// equivariant Euler class of the jet bundle, the group data and the top
/// Chern number.
#[derive(Debug, Clone)]
pub struct CaseModel {
    pub model: CohomologyModel,
    pub euler: Poly,
    pub group: GroupData,
    pub chern: BigInt,
    pub notes: Vec<String>,
}

fn integral_chern(q: &BigRat) -> Result<BigInt, BoundError> {
    to_integer(q).map_err(|e: MathError| BoundError::Integrality {
        l: 0,
        row: "chern number".into(),
        column: "[X]".into(),
        value: e.to_string(),
    })
}

/// Builds the model of a non-formula case.
pub fn build_case_model(spec: &CaseSpec) -> Result<CaseModel, CatalogError> {
    let run_err = |e: BoundError| CatalogError::Run { id: spec.id.clone(), source: e };
    let scales = spec.generator_scales()?;
    let mut notes = Vec::new();
    let (model, euler, chern) = match spec.pipeline {
        Pipeline::Homogeneous | Pipeline::Cone => {
            let (Some(space), Some(fiber), Some(twist)) = (&spec.space, &spec.fiber, spec.twist) else {
                return Err(spec.invalid("space, fiber and twist are required"));
            };
            let build = || -> Result<_, BoundError> {
                let base = space.build()?;
                let fiber = fiber.build(&base)?;
                let tower = TowerModel::new(Arc::new(base), fiber)?;
                let line = LineBundleSpec { twist };
                let euler = jet_euler(&tower, line)?;
                let chern = integral_chern(&chern_number(&tower, line)?)?;
                Ok((CohomologyModel::Tower(tower), euler, chern))
            };
            build().map_err(run_err)?
        }
        Pipeline::Explicit => {
            let Some(ExplicitSpec::Quintic { m, k }) = &spec.explicit else {
                return Err(spec.invalid("explicit pipeline needs an `explicit` table"));
            };
            let q = QuinticDerivation::derive(*m, *k).map_err(|e: CharClassError| run_err(e.into()))?;
            let chern = integral_chern(&q.chern_number).map_err(run_err)?;
            notes.push(format!(
                "ring constant a = {}, conormal constants (A, B) = ({}, {})",
                q.ring_constant, q.conormal.0, q.conormal.1
            ));
            notes.push(format!(
                "top Chern number {} includes c3(Ω⊗L); the term c1(L)·c2(Ω⊗L) alone gives {}",
                q.chern_number, q.chern_number_without_top_twist
            ));
            (CohomologyModel::Explicit(q.model), q.euler, chern)
        }
        Pipeline::Formula => return Err(spec.invalid("formula cases have no model")),
    };
    let group = GroupData::resolve(&model, &scales, spec.center()).map_err(run_err)?;
    Ok(CaseModel { model, euler, group, chern, notes })
}

/// Runs a case with the default pivot order.
pub fn run_spec(spec: &CaseSpec) -> Result<BoundReport, CatalogError> {
    run_spec_with(spec, PivotOrder::Natural)
}

/// Runs a case; the pivot order changes which decomposition is found but
/// must not change the result.
pub fn run_spec_with(spec: &CaseSpec, order: PivotOrder) -> Result<BoundReport, CatalogError> {
    spec.validate()?;
    let run_err = |e: BoundError| CatalogError::Run { id: spec.id.clone(), source: e };
    let expected = spec.expected_bound()?;
    let (blocks, base_value, chern, mut notes): (Vec<DegreeBlock>, _, _, _) = match spec.pipeline {
        Pipeline::Formula => {
            let f = spec.formula.as_ref().ok_or_else(|| spec.invalid("missing formula"))?;
            (Vec::new(), Some(f.evaluate().map_err(run_err)?), None, Vec::new())
        }
        _ => {
            let cm = build_case_model(spec)?;
            let blocks = degree_blocks(&cm.model, &cm.euler, &cm.group, order).map_err(run_err)?;
            (blocks, None, Some(cm.chern), cm.notes)
        }
    };
    let mut affine_ok = true;
    if spec.affinity == Affinity::ChernNonzero {
        if let Some(c) = &chern {
            if c.is_zero() {
                affine_ok = false;
                notes.push("affinity check failed: the top Chern number of J(L) vanishes".into());
            }
        }
    }
    let mut report = assemble_bound(AssemblyInput {
        case_id: spec.id.clone(),
        blocks,
        base_value,
        chern_number: chern.clone(),
        transforms: spec.transforms.clone(),
        expected,
        notes,
    })
    .map_err(run_err)?;
    let mut pins_ok = true;
    if let Some(pin) = &spec.pinned {
        if let Some(want) = &pin.cokernels {
            let got = report.cokernel_values();
            if got.as_ref() != Some(want) {
                pins_ok = false;
                report.notes.push(format!("pinned cokernels {want:?} differ from computed {got:?}"));
            }
        }
        if let (Some(want), Some(got)) = (pin.chern, &chern) {
            if got.abs() != BigInt::from(want) {
                pins_ok = false;
                report.notes.push(format!("pinned Chern number {want} differs from computed {}", got.abs()));
            }
        }
    }
    report.matches = report.matches && pins_ok && affine_ok;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_file_parses() {
        let cases = list_cases();
        assert_eq!(cases.len(), 24);
        assert!(cases.iter().any(|c| c.id == "thmB-g9" && c.expected == "2^11·3^4·7"));
    }

    #[test]
    fn theorem_items_and_propositions_present() {
        let ids: Vec<String> = list_cases().into_iter().map(|c| c.id).collect();
        let thm = ids.iter().filter(|i| i.starts_with("thmA-") || i.starts_with("thmB-")).count();
        let prop = ids.iter().filter(|i| i.starts_with("prop-")).count();
        assert_eq!(thm, 15);
        assert_eq!(prop, 8);
    }

    #[test]
    fn unknown_case_is_reported() {
        assert_eq!(run_case("no-such-case").unwrap_err(), CatalogError::UnknownCase("no-such-case".into()));
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let one = r#"
[[case]]
id = "a"
pipeline = "formula"
formula = { kind = "hypersurface", n = 4, d = 3 }
affinity = "chern_nonzero"
expected = "2^10·3^5·5·11"
"#;
        let text = format!("{one}{one}");
        assert_eq!(parse_cases(&text).unwrap_err(), CatalogError::Duplicate("a".into()));
    }

    #[test]
    fn illegal_transform_is_rejected() {
        let text = r#"
[[case]]
id = "bad"
pipeline = "formula"
formula = { kind = "hypersurface", n = 4, d = 3 }
transforms = ["chern_factor"]
affinity = "chern_nonzero"
expected = "1"
"#;
        assert!(matches!(parse_cases(text), Err(CatalogError::Invalid { .. })));
    }

    #[test]
    fn unknown_field_is_rejected() {
        let text = r#"
[[case]]
id = "bad"
pipeline = "formula"
formula = { kind = "hypersurface", n = 4, d = 3 }
affinity = "chern_nonzero"
expected = "1"
colour = "blue"
"#;
        assert!(matches!(parse_cases(text), Err(CatalogError::Parse(_))));
    }

    #[test]
    fn formula_case_runs() {
        let r = run_case("thmA-d3").unwrap();
        assert!(r.matches);
        assert_eq!(r.final_bound, Some("2^10·3^5·5·11".parse().unwrap()));
    }
}
