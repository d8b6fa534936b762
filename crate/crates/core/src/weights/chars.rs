use num_traits::{One, Zero};

use crate::exactmath::{rat, BigRat};

use super::{Poly, WeightsError};

/// Ordered character symbols with optional linear relations.
///
/// Each relation eliminates its last symbol with a nonzero coefficient, so a
/// reduced vector never involves an eliminated symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharBasis {
    symbols: Vec<String>,
    /// (eliminated symbol, its expression in the remaining symbols)
    eliminations: Vec<(usize, Vec<BigRat>)>,
}

impl CharBasis {
    pub fn new(symbols: &[&str]) -> Self {
        Self::with_relations(symbols, &[]).expect("no relations")
    }

    pub fn with_relations(symbols: &[&str], relations: &[Vec<BigRat>]) -> Result<Self, WeightsError> {
        let symbols: Vec<String> = symbols.iter().map(|s| s.to_string()).collect();
        let n = symbols.len();
        let mut basis = CharBasis { symbols, eliminations: Vec::new() };
        for rel in relations {
            if rel.len() != n {
                return Err(WeightsError::Dimension(format!("relation of length {} over {n} symbols", rel.len())));
            }
            let reduced = basis.reduce_coords(rel);
            let Some(last) = reduced.iter().rposition(|c| !c.is_zero()) else {
                return Err(WeightsError::DependentRelations);
            };
            let k = reduced[last].clone();
            let expr: Vec<BigRat> = reduced
                .iter()
                .enumerate()
                .map(|(i, c)| if i == last { BigRat::zero() } else { -c / &k })
                .collect();
            // Keep earlier eliminations free of the newly eliminated symbol.
            for (_, e) in basis.eliminations.iter_mut() {
                let f = std::mem::replace(&mut e[last], BigRat::zero());
                if !f.is_zero() {
                    for (i, v) in expr.iter().enumerate() {
                        e[i] += &f * v;
                    }
                }
            }
            basis.eliminations.push((last, expr));
        }
        Ok(basis)
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == name)
    }

    /// Indices of the symbols that survive elimination; these are the
    /// polynomial variables of the torus ring.
    pub fn free_symbols(&self) -> Vec<usize> {
        (0..self.len()).filter(|i| !self.eliminations.iter().any(|(e, _)| e == i)).collect()
    }

    pub fn free_names(&self) -> Vec<String> {
        self.free_symbols().into_iter().map(|i| self.symbols[i].clone()).collect()
    }

    fn reduce_coords(&self, v: &[BigRat]) -> Vec<BigRat> {
        let mut out = v.to_vec();
        for (e, expr) in &self.eliminations {
            let f = std::mem::replace(&mut out[*e], BigRat::zero());
            if !f.is_zero() {
                for (i, c) in expr.iter().enumerate() {
                    out[i] += &f * c;
                }
            }
        }
        out
    }

    /// Vector with coordinates given on all symbols, reduced.
    pub fn vector(&self, coords: Vec<BigRat>, tag: LatticeTag) -> Result<CharVec, WeightsError> {
        if coords.len() != self.len() {
            return Err(WeightsError::Dimension(format!("{} coordinates for {} symbols", coords.len(), self.len())));
        }
        Ok(CharVec { coords: self.reduce_coords(&coords), tag })
    }

    /// The basis symbol `name` as an integral character.
    pub fn symbol(&self, name: &str) -> CharVec {
        let i = self.index(name).unwrap_or_else(|| panic!("unknown symbol {name}"));
        self.unit(i)
    }

    pub fn unit(&self, i: usize) -> CharVec {
        let mut c = vec![BigRat::zero(); self.len()];
        c[i] = BigRat::one();
        CharVec { coords: self.reduce_coords(&c), tag: LatticeTag::Integer }
    }

    pub fn from_ints(&self, coords: &[i64]) -> CharVec {
        self.vector(coords.iter().map(|&c| rat(c)).collect(), LatticeTag::Integer).expect("length checked by caller")
    }

    pub fn zero_vec(&self) -> CharVec {
        CharVec { coords: vec![BigRat::zero(); self.len()], tag: LatticeTag::Integer }
    }

    /// Adds two characters; fails when they come from different bases.
    pub fn add(&self, a: &CharVec, b: &CharVec) -> Result<CharVec, WeightsError> {
        if a.coords.len() != self.len() || b.coords.len() != self.len() {
            return Err(WeightsError::BasisMismatch);
        }
        let sum: Vec<BigRat> = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
        Ok(CharVec { coords: self.reduce_coords(&sum), tag: a.tag.join(&b.tag) })
    }

    pub fn scale(&self, a: &CharVec, k: &BigRat) -> CharVec {
        CharVec { coords: a.coords.iter().map(|x| x * k).collect(), tag: a.tag.clone() }
    }

    pub fn neg(&self, a: &CharVec) -> CharVec {
        self.scale(a, &-BigRat::one())
    }

    pub fn sub(&self, a: &CharVec, b: &CharVec) -> Result<CharVec, WeightsError> {
        self.add(a, &self.neg(b))
    }

    /// Reduces a vector again; idempotent on reduced vectors.
    pub fn reduce(&self, a: &CharVec) -> CharVec {
        CharVec { coords: self.reduce_coords(&a.coords), tag: a.tag.clone() }
    }

    /// The character as a linear polynomial in the free symbols.
    pub fn to_poly(&self, a: &CharVec) -> Poly {
        let free = self.free_symbols();
        let reduced = self.reduce_coords(&a.coords);
        Poly::linear(&free.iter().map(|&i| reduced[i].clone()).collect::<Vec<_>>())
    }

    /// Linear polynomial image of every symbol, including eliminated ones.
    pub fn symbol_polys(&self) -> Vec<Poly> {
        (0..self.len()).map(|i| self.to_poly(&self.unit(i))).collect()
    }

    /// Whether the relations annihilate the vector `v` (used to check that a
    /// linear map preserves them).
    pub fn is_zero(&self, v: &CharVec) -> bool {
        self.reduce_coords(&v.coords).iter().all(Zero::is_zero)
    }
}

/// Which lattice a character is required to lie in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeTag {
    /// All coordinates integral.
    Integer,
    /// Coordinates on `block` are all integral or all half-integral; the rest
    /// are integral.
    Spin { block: Vec<usize> },
}

impl LatticeTag {
    fn join(&self, other: &LatticeTag) -> LatticeTag {
        match (self, other) {
            (LatticeTag::Integer, LatticeTag::Integer) => LatticeTag::Integer,
            (LatticeTag::Spin { block }, _) | (_, LatticeTag::Spin { block }) => LatticeTag::Spin { block: block.clone() },
        }
    }
}

/// A character: rational coordinates over a [`CharBasis`] plus a lattice tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharVec {
    coords: Vec<BigRat>,
    tag: LatticeTag,
}

impl CharVec {
    pub fn coords(&self) -> &[BigRat] {
        &self.coords
    }

    pub fn tag(&self) -> &LatticeTag {
        &self.tag
    }

    pub fn with_tag(mut self, tag: LatticeTag) -> Self {
        self.tag = tag;
        self
    }
}

fn is_integral(q: &BigRat) -> bool {
    q.denom().is_one()
}

fn is_half_odd(q: &BigRat) -> bool {
    (q * rat(2)).denom().is_one() && !is_integral(q)
}

/// Checks the lattice constraint named by the vector's tag.
pub fn validate_lattice(v: &CharVec) -> bool {
    match &v.tag {
        LatticeTag::Integer => v.coords.iter().all(is_integral),
        LatticeTag::Spin { block } => {
            let outside_ok = v.coords.iter().enumerate().filter(|(i, _)| !block.contains(i)).all(|(_, c)| is_integral(c));
            let inside: Vec<&BigRat> = block.iter().filter_map(|&i| v.coords.get(i)).collect();
            let all_int = inside.iter().all(|c| is_integral(c));
            let all_half = inside.iter().all(|c| is_half_odd(c));
            outside_ok && (all_int || all_half)
        }
    }
}
