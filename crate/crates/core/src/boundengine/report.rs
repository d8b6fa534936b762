use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactmath::serde_int::{self, SerInt};
use crate::exactmath::{factorize, CokernelOrder, Factored};

use super::{cokernel_product, extended_first_cokernel, to_natural, BoundError, DegreeBlock};

/// A step applied to Π i_l (or to a closed-formula value).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    /// Multiply by |⟨c_d(J(L)), [X]⟩|.
    ChernFactor,
    /// Replace i₁ by the cokernel order of the first-degree map of the group
    /// extended by fiberwise scalars.
    ExtendedFirstDegree,
    /// Divide by gcd(value, N) for a central subgroup of order N acting
    /// trivially.
    Center(u64),
    /// Multiply by 2 for the covering involution of a double cover.
    Deck,
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transform::ChernFactor => write!(f, "chern_factor"),
            Transform::ExtendedFirstDegree => write!(f, "extended_first_degree"),
            Transform::Center(n) => write!(f, "center:{n}"),
            Transform::Deck => write!(f, "deck"),
        }
    }
}

impl FromStr for Transform {
    type Err = BoundError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "chern_factor" => Ok(Transform::ChernFactor),
            "extended_first_degree" => Ok(Transform::ExtendedFirstDegree),
            "deck" => Ok(Transform::Deck),
            other => match other.strip_prefix("center:") {
                Some(n) => n
                    .trim()
                    .parse::<u64>()
                    .ok()
                    .filter(|&v| v > 0)
                    .map(Transform::Center)
                    .ok_or_else(|| BoundError::Config(format!("bad center order in {other:?}"))),
                None => Err(BoundError::Config(format!("unknown transform {other:?}"))),
            },
        }
    }
}

impl Serialize for Transform {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Transform {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One f_l in a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DegreeReport {
    pub l: u32,
    pub row_labels: Vec<String>,
    pub column_labels: Vec<String>,
    #[serde(with = "serde_int::rows")]
    pub matrix: Vec<Vec<BigInt>>,
    #[serde(with = "serde_int::vec")]
    pub divisors: Vec<BigInt>,
    /// Cokernel order i_l.
    #[serde(rename = "i_l")]
    pub cokernel: CokernelOrder,
}

/// A transform as applied, with the value it produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TransformRecord {
    pub transform: Transform,
    /// Human-readable effect, such as "×108" or "÷2".
    pub effect: String,
    pub value: Factored,
}

/// Everything computed for one case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundReport {
    pub case_id: String,
    pub per_degree: Vec<DegreeReport>,
    pub cokernel_product: Option<CokernelOrder>,
    pub chern_factor: Option<SerInt>,
    pub base_value: Option<Factored>,
    pub transforms: Vec<TransformRecord>,
    pub final_bound: Option<Factored>,
    pub final_value: Option<String>,
    pub expected: Factored,
    #[serde(rename = "match")]
    pub matches: bool,
    pub finite: bool,
    pub notes: Vec<String>,
}

impl BoundReport {
    /// i_l values in degree order.
    pub fn cokernels(&self) -> Vec<CokernelOrder> {
        self.per_degree.iter().map(|d| d.cokernel.clone()).collect()
    }

    /// i_l values as machine integers, or None if any is infinite.
    pub fn cokernel_values(&self) -> Option<Vec<u64>> {
        self.per_degree
            .iter()
            .map(|d| d.cokernel.finite().and_then(|v| u64::try_from(v.clone()).ok()))
            .collect()
    }

    /// Value recorded after the named transform, if it was applied.
    pub fn value_after(&self, t: Transform) -> Option<&Factored> {
        self.transforms.iter().find(|r| r.transform == t).map(|r| &r.value)
    }
}

/// Inputs to [`assemble_bound`].
#[derive(Debug, Clone)]
pub struct AssemblyInput {
    pub case_id: String,
    pub blocks: Vec<DegreeBlock>,
    /// Starting value for closed-formula cases (no S-matrices).
    pub base_value: Option<BigUint>,
    pub chern_number: Option<BigInt>,
    pub transforms: Vec<Transform>,
    pub expected: Factored,
    pub notes: Vec<String>,
}

fn degree_report(b: &DegreeBlock) -> DegreeReport {
    DegreeReport {
        l: b.s.l,
        row_labels: b.s.rows.clone(),
        column_labels: b.s.column_labels.clone(),
        matrix: b.s.matrix.to_rows(),
        divisors: b.divisors.clone(),
        cokernel: b.cokernel.clone(),
    }
}

/// Applies the transform chain to Π i_l (or the closed-formula value) and
/// compares the result with the expected factorisation.
pub fn assemble_bound(input: AssemblyInput) -> Result<BoundReport, BoundError> {
    let per_degree: Vec<DegreeReport> = input.blocks.iter().map(degree_report).collect();
    let mut notes = input.notes.clone();
    let (start, product) = match &input.base_value {
        Some(v) => (Some(v.clone()), None),
        None => {
            let p = cokernel_product(&input.blocks);
            (p.finite().and_then(to_natural), Some(p))
        }
    };
    let base_value = start.as_ref().map(factorize);
    let mut value = start;
    let mut records = Vec::new();
    for &t in &input.transforms {
        let Some(v) = value.clone() else { break };
        let (next, effect) = match t {
            Transform::ChernFactor => {
                let c = input
                    .chern_number
                    .as_ref()
                    .ok_or_else(|| BoundError::Config("chern_factor needs a Chern number".into()))?;
                match c.abs().to_biguint().filter(|x| !x.is_zero()) {
                    Some(f) => (Some(&v * &f), format!("×{f}")),
                    None => {
                        notes.push("Chern number vanishes; the regular-section space is not known to be affine".into());
                        (None, "×0".to_string())
                    }
                }
            }
            Transform::ExtendedFirstDegree => {
                let first = input
                    .blocks
                    .iter()
                    .find(|b| b.s.l == 1)
                    .ok_or_else(|| BoundError::Config("extended_first_degree needs an l = 1 block".into()))?;
                if first.s.matrix.rows() != 1 || first.s.matrix.cols() != 1 {
                    return Err(BoundError::Config("extended_first_degree needs a 1×1 first-degree matrix".into()));
                }
                let a = first.s.matrix.get(0, 0).clone();
                let b = input.chern_number.clone().unwrap_or_default();
                let ext = extended_first_cokernel(&a, &b);
                let old = first.cokernel.finite().and_then(to_natural);
                match (ext.finite().and_then(to_natural), old) {
                    (Some(e), Some(o)) => {
                        let (q, r) = (&v * &e).div_rem(&o);
                        debug_assert!(r.is_zero());
                        (Some(q), format!("i₁ {o} → {e}"))
                    }
                    _ => (None, "i₁ → infinite".to_string()),
                }
            }
            Transform::Center(n) => {
                let g = v.gcd(&BigUint::from(n));
                if !g.is_one() || n == 1 {
                    (Some(&v / &g), format!("÷{g}"))
                } else {
                    (Some(v.clone()), "÷1".to_string())
                }
            }
            Transform::Deck => (Some(&v * BigUint::from(2u32)), "×2".to_string()),
        };
        value = next;
        match &value {
            Some(x) => records.push(TransformRecord { transform: t, effect, value: factorize(x) }),
            None => break,
        }
    }
    let final_bound = value.as_ref().map(factorize);
    let finite = final_bound.is_some();
    let matches = final_bound.as_ref() == Some(&input.expected);
    if let Some(c) = &input.chern_number {
        if c.is_zero() {
            notes.push("Chern number is zero".into());
        }
    }
    Ok(BoundReport {
        case_id: input.case_id,
        per_degree,
        cokernel_product: product,
        chern_factor: input.chern_number.map(SerInt),
        base_value,
        transforms: records,
        final_value: value.map(|v| v.to_string()),
        final_bound,
        expected: input.expected,
        matches,
        finite,
        notes,
    })
}
