//! Decomposition of equivariant Euler classes in the ideal of group
//! generators, S-matrices, cokernel orders and bound assembly.

mod formulas;
mod report;

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use crate::charclasses::CharClassError;
use crate::exactmath::{cokernel_order, smith_normal_form, BigRat, CokernelOrder, IntMatrix, MathError, SparseSystem};
use crate::spaces::{CohomologyModel, HomologyClass, SpaceError};
use crate::weights::{monomials_of_degree, Poly};

pub use formulas::{hypersurface_bound, quadric_hypersurface_bound};
pub use report::{assemble_bound, AssemblyInput, BoundReport, DegreeReport, Transform, TransformRecord};

/// Errors raised by the bound pipeline.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoundError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    CharClass(#[from] CharClassError),
    #[error(transparent)]
    Math(#[from] MathError),
    #[error("class is not in the ideal generated by the group generators: {0}")]
    NotInIdeal(String),
    #[error("non-integral S-matrix entry {value} at l = {l}, row {row}, column {column}")]
    Integrality { l: u32, row: String, column: String, value: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("configuration error: {0}")]
    Config(String),
}

/// How a generator of H*(BG) appears in the model ring.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorKind {
    /// A ring variable that is itself a group generator (tᵢ, ζ, s₂ …).
    Pure(usize),
    /// A Weyl-invariant polynomial written in the model ring.
    Invariant(Poly),
}

/// One polynomial generator of H*(BG, ℚ) with its primitive scale κ: the
/// classes κ·γ̄(g) form a ℤ-basis of the integral primitives.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupGenerator {
    pub name: String,
    pub degree: u32,
    pub kappa: BigRat,
    pub kind: GeneratorKind,
}

/// Generators of H*(BG) for the acting group, plus the order of the part of
/// the center acting trivially.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupData {
    pub generators: Vec<GroupGenerator>,
    pub center: u64,
}

impl GroupData {
    /// Resolves generator names against a model: ring variables that are
    /// pure group variables, or named invariants of the flag factor.
    pub fn resolve(model: &CohomologyModel, specs: &[(String, BigRat)], center: u64) -> Result<Self, BoundError> {
        let ring = model.ring();
        let mut generators = Vec::new();
        for (name, kappa) in specs {
            if kappa.is_zero() || kappa.is_negative() {
                return Err(BoundError::Config(format!("generator {name}: scale must be positive")));
            }
            let kind = match ring.index(name) {
                Some(v) if model.pure_vars().contains(&v) => GeneratorKind::Pure(v),
                Some(_) => return Err(BoundError::Config(format!("{name} is a ring variable but not a group generator"))),
                None => {
                    let CohomologyModel::Tower(t) = model else {
                        return Err(BoundError::Config(format!("unknown generator {name}")));
                    };
                    let (_, p) = t
                        .base()
                        .invariants()
                        .iter()
                        .find(|(n, _)| n == name)
                        .ok_or_else(|| BoundError::Config(format!("unknown generator {name}")))?;
                    GeneratorKind::Invariant(t.lift_y(&t.base().to_y(p)?))
                }
            };
            let degree = match &kind {
                GeneratorKind::Pure(v) => ring.weights()[*v],
                GeneratorKind::Invariant(p) => ring
                    .degree(p)
                    .ok_or_else(|| BoundError::Config(format!("generator {name} is not homogeneous")))?,
            };
            generators.push(GroupGenerator { name: name.clone(), degree, kappa: kappa.clone(), kind });
        }
        for g in &model.pure_vars().iter().map(|&v| ring.names()[v].clone()).collect::<Vec<_>>() {
            if !generators.iter().any(|x| &x.name == g) {
                return Err(BoundError::Config(format!("pure group variable {g} is missing from the generator list")));
            }
        }
        if center == 0 {
            return Err(BoundError::Config("center order must be positive".into()));
        }
        Ok(GroupData { generators, center })
    }

    /// Distinct generator degrees l in increasing order.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.generators.iter().map(|g| g.degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Indices of generators of degree l: a basis of P^{2l−1}.
    pub fn rows_of_degree(&self, l: u32) -> Vec<usize> {
        (0..self.generators.len()).filter(|&i| self.generators[i].degree == l).collect()
    }
}

/// Which particular solution the sparse solver returns for an
/// underdetermined decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotOrder {
    #[default]
    Natural,
    Reversed,
}

/// Writes `e` as Σ g_k·c_k over the group generators. Terms involving a pure
/// generator variable are divided by the first such variable; the rest is
/// decomposed over the invariant generators by one exact linear solve per
/// fiber power and degree.
pub fn decompose_in_ideal(
    model: &CohomologyModel,
    e: &Poly,
    group: &GroupData,
    order: PivotOrder,
) -> Result<Vec<Poly>, BoundError> {
    let ring = model.ring();
    let n = ring.nvars();
    let nf = model.normal_form(e)?;
    let mut coeffs = vec![Poly::zero(n); group.generators.len()];
    let pure: Vec<(usize, usize)> = group
        .generators
        .iter()
        .enumerate()
        .filter_map(|(k, g)| match g.kind {
            GeneratorKind::Pure(v) => Some((k, v)),
            _ => None,
        })
        .collect();
    let mut rest = Poly::zero(n);
    for (m, c) in nf.terms() {
        match pure.iter().find(|(_, v)| m[*v] > 0) {
            Some(&(k, v)) => {
                let mut q = m.clone();
                q[v] -= 1;
                coeffs[k].add_term(q, c.clone());
            }
            None => rest.add_term(m.clone(), c.clone()),
        }
    }
    if rest.is_zero() {
        return Ok(coeffs);
    }
    let CohomologyModel::Tower(tower) = model else {
        return Err(BoundError::NotInIdeal("explicit model remainder without pure generators".into()));
    };
    let n_y = tower.n_y();
    let y_degrees = tower.base().y_degrees().to_vec();
    let invariants: Vec<(usize, &Poly, u32)> = group
        .generators
        .iter()
        .enumerate()
        .filter_map(|(k, g)| match &g.kind {
            GeneratorKind::Invariant(p) => Some((k, p, g.degree)),
            _ => None,
        })
        .collect();
    // Group the remainder by the exponents of the non-y variables.
    let mut blocks: BTreeMap<(Vec<u16>, u32), Poly> = BTreeMap::new();
    for (m, c) in rest.terms() {
        let key = m[n_y..].to_vec();
        let deg = Poly::mono_degree(&m[..n_y], &y_degrees);
        let mut y = m.clone();
        for x in y[n_y..].iter_mut() {
            *x = 0;
        }
        blocks.entry((key, deg)).or_insert_with(|| Poly::zero(n)).add_term(y, c.clone());
    }
    for ((key, deg), target) in blocks {
        let mut unknowns: Vec<(usize, Vec<u16>)> = Vec::new();
        for &(k, _, dk) in &invariants {
            if dk <= deg {
                for mono in monomials_of_degree(&y_degrees, deg - dk) {
                    let mut full = mono;
                    full.resize(n, 0);
                    unknowns.push((k, full));
                }
            }
        }
        let mut eq_index: HashMap<Vec<u16>, usize> = HashMap::new();
        let mut rows: Vec<Vec<(usize, BigRat)>> = Vec::new();
        for (u, (k, mono)) in unknowns.iter().enumerate() {
            let (_, g, _) = invariants.iter().find(|(kk, _, _)| kk == k).expect("listed generator");
            for (m, c) in g.terms() {
                let prod: Vec<u16> = m.iter().zip(mono).map(|(a, b)| a + b).collect();
                let next = eq_index.len();
                let r = *eq_index.entry(prod).or_insert(next);
                if r == rows.len() {
                    rows.push(Vec::new());
                }
                rows[r].push((u, c.clone()));
            }
        }
        let mut rhs = vec![BigRat::zero(); rows.len()];
        for (m, c) in target.terms() {
            match eq_index.get(m) {
                Some(&r) => rhs[r] = c.clone(),
                None => {
                    return Err(BoundError::NotInIdeal(format!(
                        "monomial {} cannot be produced by the generators",
                        tower.ring().fmt(&Poly::monomial(n, m.clone(), c.clone()))
                    )))
                }
            }
        }
        let mut system = SparseSystem::new(unknowns.len());
        if order == PivotOrder::Reversed {
            let perm: Vec<usize> = (0..unknowns.len()).rev().collect();
            system = system.with_pivot_order(&perm);
        }
        for (row, r) in rows.into_iter().zip(rhs) {
            system.add_equation(row, r);
        }
        let x = system
            .solve()
            .ok_or_else(|| BoundError::NotInIdeal(format!("inconsistent system in degree {deg}")))?;
        for (u, (k, mono)) in unknowns.iter().enumerate() {
            if x[u].is_zero() {
                continue;
            }
            let mut m = mono.clone();
            for (i, &e) in key.iter().enumerate() {
                m[n_y + i] += e;
            }
            coeffs[*k].add_term(m, x[u].clone());
        }
    }
    Ok(coeffs)
}

/// Checks Σ g_k·c_k = e in the model ring.
pub fn verify_decomposition(model: &CohomologyModel, e: &Poly, group: &GroupData, coeffs: &[Poly]) -> Result<bool, BoundError> {
    let n = model.ring().nvars();
    let mut sum = Poly::zero(n);
    for (g, c) in group.generators.iter().zip(coeffs) {
        let gp = match &g.kind {
            GeneratorKind::Pure(v) => Poly::var(n, *v),
            GeneratorKind::Invariant(p) => p.clone(),
        };
        sum.add_assign_ref(&gp.mul_ref(c));
    }
    let diff = &model.normal_form(&sum)? - &model.normal_form(e)?;
    Ok(model.normal_form(&diff)?.is_zero())
}

/// The matrix f_l with the homology classes of the columns.
#[derive(Debug, Clone)]
pub struct SMatrix {
    pub l: u32,
    pub rows: Vec<String>,
    pub columns: Vec<HomologyClass>,
    pub column_labels: Vec<String>,
    pub matrix: IntMatrix,
}

/// Builds f_l: rows are the generators of degree l, columns the homology
/// basis in complex degree dim − l + 1, entries ⟨α*(c_k), y⟩ / κ_k.
pub fn s_matrix(model: &CohomologyModel, coeffs: &[Poly], group: &GroupData, l: u32) -> Result<SMatrix, BoundError> {
    let rows = group.rows_of_degree(l);
    let dim = model.dim() as i64;
    let k = dim - l as i64 + 1;
    let columns = if k >= 0 { model.homology_basis(k as usize) } else { Vec::new() };
    let mut entries: Vec<Vec<BigInt>> = Vec::new();
    for &r in &rows {
        let g = &group.generators[r];
        let mut row = Vec::new();
        for c in &columns {
            let v = model.pair(&coeffs[r], c)? / &g.kappa;
            if !v.is_integer() {
                return Err(BoundError::Integrality {
                    l,
                    row: g.name.clone(),
                    column: model.class_label(c),
                    value: v.to_string(),
                });
            }
            row.push(v.to_integer());
        }
        entries.push(row);
    }
    let matrix = if columns.is_empty() { IntMatrix::zeros(rows.len(), 0) } else { IntMatrix::from_rows(&entries)? };
    Ok(SMatrix {
        l,
        rows: rows.iter().map(|&r| group.generators[r].name.clone()).collect(),
        column_labels: columns.iter().map(|c| model.class_label(c)).collect(),
        columns,
        matrix,
    })
}

/// One degree of the pipeline: f_l, its Smith form and cokernel order.
#[derive(Debug, Clone)]
pub struct DegreeBlock {
    pub s: SMatrix,
    pub divisors: Vec<BigInt>,
    pub cokernel: CokernelOrder,
}

/// Runs decomposition and S-matrices for every generator degree.
pub fn degree_blocks(model: &CohomologyModel, euler: &Poly, group: &GroupData, order: PivotOrder) -> Result<Vec<DegreeBlock>, BoundError> {
    let coeffs = decompose_in_ideal(model, euler, group, order)?;
    group
        .degrees()
        .into_iter()
        .map(|l| {
            let s = s_matrix(model, &coeffs, group, l)?;
            let snf = smith_normal_form(&s.matrix);
            let cokernel = cokernel_order(&s.matrix, s.matrix.rows());
            Ok(DegreeBlock { s, divisors: snf.divisors, cokernel })
        })
        .collect()
}

/// Π i_l, or infinite when any factor is.
pub fn cokernel_product(blocks: &[DegreeBlock]) -> CokernelOrder {
    let mut acc = BigInt::from(1);
    for b in blocks {
        match b.cokernel.finite() {
            Some(v) => acc *= v,
            None => return CokernelOrder::infinite(),
        }
    }
    CokernelOrder::Finite(acc)
}

/// Cokernel order of [[A, 0], [B, ±1]]: |A|, or infinite when A = 0.
pub fn extended_first_cokernel(a: &BigInt, b: &BigInt) -> CokernelOrder {
    let m = IntMatrix::from_rows(&[vec![a.clone(), BigInt::zero()], vec![b.clone(), BigInt::from(1)]]).expect("square");
    cokernel_order(&m, 2)
}

/// Converts a positive integer to a natural number.
pub(crate) fn to_natural(n: &BigInt) -> Option<BigUint> {
    n.to_biguint().filter(|v| !v.is_zero())
}
