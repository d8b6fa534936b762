use crate::exactmath::BigRat;

use super::{Mono, Poly};

/// Named polynomial ring with a positive integer degree attached to each
/// variable. Cohomological degree is twice the weighted degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRing {
    names: Vec<String>,
    weights: Vec<u32>,
}

impl PolyRing {
    pub fn new(vars: &[(&str, u32)]) -> Self {
        let names: Vec<String> = vars.iter().map(|(n, _)| n.to_string()).collect();
        let weights = vars.iter().map(|(_, w)| *w).collect();
        let mut seen = std::collections::BTreeSet::new();
        for n in &names {
            assert!(seen.insert(n.clone()), "duplicate variable name {n}");
        }
        PolyRing { names, weights }
    }

    pub fn from_parts(names: Vec<String>, weights: Vec<u32>) -> Self {
        assert_eq!(names.len(), weights.len(), "one weight per variable");
        PolyRing { names, weights }
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The variable called `name`.
    ///
    /// # Panics
    /// Panics if the ring has no such variable.
    pub fn var(&self, name: &str) -> Poly {
        let i = self.index(name).unwrap_or_else(|| panic!("no variable {name}"));
        Poly::var(self.nvars(), i)
    }

    pub fn zero(&self) -> Poly {
        Poly::zero(self.nvars())
    }

    pub fn one(&self) -> Poly {
        Poly::one(self.nvars())
    }

    pub fn constant(&self, c: BigRat) -> Poly {
        Poly::constant(self.nvars(), c)
    }

    pub fn int(&self, c: i64) -> Poly {
        self.constant(crate::exactmath::rat(c))
    }

    pub fn degree(&self, p: &Poly) -> Option<u32> {
        p.degree(&self.weights)
    }

    pub fn homogeneous_part(&self, p: &Poly, d: u32) -> Poly {
        p.homogeneous_part(&self.weights, d)
    }

    /// All monomials of weighted degree `d`, in lexicographic order.
    pub fn monomials_of_degree(&self, d: u32) -> Vec<Mono> {
        monomials_of_degree(&self.weights, d)
    }

    pub fn fmt(&self, p: &Poly) -> String {
        p.display_with(&self.names).to_string()
    }
}

/// All exponent vectors with Σ eᵢ·wᵢ = d.
pub fn monomials_of_degree(weights: &[u32], d: u32) -> Vec<Mono> {
    fn rec(weights: &[u32], i: usize, left: u32, cur: &mut Mono, out: &mut Vec<Mono>) {
        if i == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = weights[i];
        assert!(w > 0, "variable weights must be positive");
        let max = left / w;
        for e in 0..=max {
            cur[i] = e as u16;
            rec(weights, i + 1, left - e * w, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u16; weights.len()];
    rec(weights, 0, d, &mut cur, &mut out);
    out.sort();
    out
}
