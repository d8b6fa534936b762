use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{BigRat, MathError};

/// Solves `A·x = b` over the rationals.
///
/// Returns `Ok(None)` when the system is inconsistent. Free variables are set
/// to zero, so an underdetermined system yields one particular solution.
pub fn solve_linear(a: &[Vec<BigRat>], b: &[BigRat]) -> Result<Option<Vec<BigRat>>, MathError> {
    if a.len() != b.len() {
        return Err(MathError::Dimension(format!("{} rows but {} right-hand sides", a.len(), b.len())));
    }
    let cols = a.first().map_or(0, Vec::len);
    if a.iter().any(|r| r.len() != cols) {
        return Err(MathError::Dimension("ragged coefficient matrix".into()));
    }
    let mut sys = SparseSystem::new(cols);
    for (row, rhs) in a.iter().zip(b) {
        let entries = row.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone()));
        sys.add_equation(entries, rhs.clone());
    }
    Ok(sys.solve())
}

/// Rank of a rational matrix.
pub fn rank(a: &[Vec<BigRat>]) -> usize {
    let cols = a.first().map_or(0, Vec::len);
    let mut sys = SparseSystem::new(cols);
    for row in a {
        let entries = row.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone()));
        sys.add_equation(entries, BigRat::zero());
    }
    sys.echelon().len()
}

type SparseRow = BTreeMap<usize, BigRat>;

/// Sparse exact linear system, eliminated row by row.
///
/// The order in which unknowns are preferred as pivots can be changed with
/// [`SparseSystem::with_pivot_order`]; different orders produce different
/// particular solutions of an underdetermined system.
#[derive(Debug, Clone)]
pub struct SparseSystem {
    unknowns: usize,
    rows: Vec<(SparseRow, BigRat)>,
    rank_of: Vec<usize>,
}

impl SparseSystem {
    pub fn new(unknowns: usize) -> Self {
        SparseSystem { unknowns, rows: Vec::new(), rank_of: (0..unknowns).collect() }
    }

    /// Sets a permutation used to rank unknowns: lower rank is pivoted first.
    pub fn with_pivot_order(mut self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.unknowns, "pivot order must be a permutation of the unknowns");
        for (rank, &u) in order.iter().enumerate() {
            self.rank_of[u] = rank;
        }
        self
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    pub fn add_equation(&mut self, entries: impl IntoIterator<Item = (usize, BigRat)>, rhs: BigRat) {
        let mut row = SparseRow::new();
        for (i, v) in entries {
            assert!(i < self.unknowns, "unknown index out of range");
            let e = row.entry(i).or_insert_with(BigRat::zero);
            *e += v;
        }
        row.retain(|_, v| !v.is_zero());
        self.rows.push((row, rhs));
    }

    fn pick_pivot(&self, row: &SparseRow) -> Option<usize> {
        row.keys().copied().min_by_key(|&k| self.rank_of[k])
    }

    /// Reduced echelon form: list of (pivot unknown, normalised row, rhs).
    /// Returns `Err(())` through `None` pivots when an equation reduces to `0 = c ≠ 0`.
    fn echelon(&self) -> Vec<(usize, SparseRow, BigRat)> {
        self.eliminate().unwrap_or_else(|basis| basis)
    }

    /// Gauss–Jordan elimination; `Err` carries the partial basis when inconsistent.
    #[allow(clippy::type_complexity)]
    fn eliminate(&self) -> Result<Vec<(usize, SparseRow, BigRat)>, Vec<(usize, SparseRow, BigRat)>> {
        let mut basis: Vec<(usize, SparseRow, BigRat)> = Vec::new();
        let mut pivot_index: BTreeMap<usize, usize> = BTreeMap::new();
        let mut consistent = true;
        for (row0, rhs0) in &self.rows {
            let mut row = row0.clone();
            let mut rhs = rhs0.clone();
            // Reduce against existing pivots; repeat because substitution may
            // introduce other pivot columns.
            loop {
                let hit = row.keys().find(|k| pivot_index.contains_key(k)).copied();
                let Some(k) = hit else { break };
                let factor = row.remove(&k).expect("present");
                let (_, prow, prhs) = &basis[pivot_index[&k]];
                for (c, v) in prow {
                    if *c == k {
                        continue;
                    }
                    let e = row.entry(*c).or_insert_with(BigRat::zero);
                    *e -= &factor * v;
                    if e.is_zero() {
                        row.remove(c);
                    }
                }
                rhs -= &factor * prhs;
            }
            let Some(p) = self.pick_pivot(&row) else {
                if !rhs.is_zero() {
                    consistent = false;
                }
                continue;
            };
            let inv = BigRat::one() / &row[&p];
            for v in row.values_mut() {
                *v *= &inv;
            }
            rhs *= &inv;
            // Back-substitute into earlier rows to keep the basis fully reduced.
            for (_, brow, brhs) in basis.iter_mut() {
                if let Some(f) = brow.remove(&p) {
                    for (c, v) in &row {
                        if *c == p {
                            continue;
                        }
                        let e = brow.entry(*c).or_insert_with(BigRat::zero);
                        *e -= &f * v;
                        if e.is_zero() {
                            brow.remove(c);
                        }
                    }
                    *brhs -= &f * &rhs;
                }
            }
            pivot_index.insert(p, basis.len());
            basis.push((p, row, rhs));
        }
        if consistent {
            Ok(basis)
        } else {
            Err(basis)
        }
    }

    /// One particular solution with all free unknowns set to zero, or `None`
    /// when the system is inconsistent.
    pub fn solve(&self) -> Option<Vec<BigRat>> {
        let basis = self.eliminate().ok()?;
        let mut x = vec![BigRat::zero(); self.unknowns];
        for (p, _, rhs) in basis {
            x[p] = rhs;
        }
        Some(x)
    }
}
