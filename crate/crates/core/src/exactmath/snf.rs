use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::IntMatrix;

/// Smith normal form `U·M·V = diag(divisors)` with unimodular witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    /// Elementary divisors d₁ | d₂ | …, zeros last; length min(rows, cols).
    pub divisors: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.divisors.iter().filter(|d| !d.is_zero()).count()
    }
}

/// Order of a cokernel: a positive integer, or infinite when the map is not
/// of full rank onto its target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CokernelOrder {
    Finite(#[serde(with = "super::serde_int")] BigInt),
    Infinite(InfiniteTag),
}

/// Serialises as the string `"infinite"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InfiniteTag {
    Infinite,
}

impl CokernelOrder {
    pub fn infinite() -> Self {
        CokernelOrder::Infinite(InfiniteTag::Infinite)
    }

    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            CokernelOrder::Finite(n) => Some(n),
            CokernelOrder::Infinite(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.finite().is_some()
    }
}

impl fmt::Display for CokernelOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CokernelOrder::Finite(n) => write!(f, "{n}"),
            CokernelOrder::Infinite(_) => write!(f, "infinite"),
        }
    }
}

/// Finds the nonzero entry of least absolute value in the trailing block,
/// breaking ties by (row, col).
fn min_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for r in t..a.rows() {
        for c in t..a.cols() {
            let v = a.get(r, c);
            if v.is_zero() {
                continue;
            }
            let m = v.abs();
            if best.as_ref().is_none_or(|(b, _, _)| m < *b) {
                best = Some((m, r, c));
            }
        }
    }
    best.map(|(_, r, c)| (r, c))
}

/// Computes the Smith normal form by elementary row and column operations,
/// always pivoting on the entry of least absolute value.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let steps = rows.min(cols);
    let mut t = 0;
    while t < steps {
        let Some((pr, pc)) = min_pivot(&a, t) else { break };
        a.swap_rows(t, pr);
        u.swap_rows(t, pr);
        a.swap_cols(t, pc);
        v.swap_cols(t, pc);
        let mut dirty = false;
        for r in t + 1..rows {
            let q = a.get(r, t).div_floor(a.get(t, t));
            if !q.is_zero() {
                let nq = -q;
                a.add_row_multiple(r, t, &nq);
                u.add_row_multiple(r, t, &nq);
            }
            dirty |= !a.get(r, t).is_zero();
        }
        for c in t + 1..cols {
            let q = a.get(t, c).div_floor(a.get(t, t));
            if !q.is_zero() {
                let nq = -q;
                a.add_col_multiple(c, t, &nq);
                v.add_col_multiple(c, t, &nq);
            }
            dirty |= !a.get(t, c).is_zero();
        }
        if dirty {
            // A smaller remainder appeared; pivot again on the same block.
            continue;
        }
        // The pivot must divide every entry of the remaining block.
        let p = a.get(t, t).clone();
        let bad = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| !a.get(r, c).is_multiple_of(&p)));
        if let Some(r) = bad {
            let one = BigInt::one();
            a.add_row_multiple(t, r, &one);
            u.add_row_multiple(t, r, &one);
            continue;
        }
        if p.is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let divisors = (0..steps).map(|i| a.get(i, i).clone()).collect();
    SnfResult { divisors, left: u, right: v }
}

/// Order of the cokernel of `M` viewed as a map onto a lattice of rank
/// `target_rank` (the number of rows).
pub fn cokernel_order(m: &IntMatrix, target_rank: usize) -> CokernelOrder {
    if target_rank == 0 {
        return CokernelOrder::Finite(BigInt::one());
    }
    let snf = smith_normal_form(m);
    if snf.rank() != target_rank {
        return CokernelOrder::infinite();
    }
    CokernelOrder::Finite(snf.divisors.iter().filter(|d| !d.is_zero()).product())
}
