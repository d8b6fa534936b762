use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::exactmath::BigRat;

/// Exponent vector of a monomial.
pub type Mono = Vec<u16>;

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in a `BTreeMap`, so the last entry is the leading term in
/// lexicographic order with variable 0 most significant. Zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Mono, BigRat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRat::one())
    }

    pub fn constant(nvars: usize, c: BigRat) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, BigRat::one())
    }

    pub fn monomial(nvars: usize, exps: Mono, c: BigRat) -> Self {
        assert_eq!(exps.len(), nvars, "exponent vector length");
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Linear form Σ coeffs[i]·x_i.
    pub fn linear(coeffs: &[BigRat]) -> Self {
        let n = coeffs.len();
        let mut p = Poly::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; n];
                e[i] = 1;
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigRat)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Mono, BigRat)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, exps: &[u16]) -> BigRat {
        self.terms.get(exps).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn constant_term(&self) -> BigRat {
        self.coeff(&vec![0; self.nvars])
    }

    /// Leading term in lexicographic order.
    pub fn leading(&self) -> Option<(&Mono, &BigRat)> {
        self.terms.last_key_value()
    }

    pub fn add_term(&mut self, exps: Mono, c: BigRat) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &Poly) {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub_assign_ref(&mut self, other: &Poly) {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        for (m, c) in &other.terms {
            self.add_term(m.clone(), -c);
        }
    }

    /// self += k·other
    pub fn add_scaled(&mut self, other: &Poly, k: &BigRat) {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        if k.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * k);
        }
    }

    pub fn scale(&self, k: &BigRat) -> Poly {
        if k.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul_ref(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut acc: std::collections::HashMap<Mono, BigRat> = std::collections::HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Mono = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                let v = ca * cb;
                match acc.entry(m) {
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(v);
                    }
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += v;
                    }
                }
            }
        }
        Poly { nvars: self.nvars, terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    /// Multiplies by a single monomial.
    pub fn mul_monomial(&self, exps: &[u16], c: &BigRat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.iter().zip(exps).map(|(a, b)| a + b).collect(), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        result
    }

    /// Weighted degree of a monomial.
    pub fn mono_degree(exps: &[u16], weights: &[u32]) -> u32 {
        exps.iter().zip(weights).map(|(&e, &w)| e as u32 * w).sum()
    }

    /// Largest weighted degree of a term, or `None` for the zero polynomial.
    pub fn degree(&self, weights: &[u32]) -> Option<u32> {
        self.terms.keys().map(|m| Self::mono_degree(m, weights)).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.degree(&vec![1; self.nvars])
    }

    pub fn homogeneous_part(&self, weights: &[u32], d: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| Self::mono_degree(m, weights) == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Keeps only the terms not involving any of `vars`.
    pub fn set_zero(&self, vars: &[usize]) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| vars.iter().all(|&v| m[v] == 0))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Groups terms by the exponent of `var`; the returned polynomials no
    /// longer involve `var`.
    pub fn split_by_var(&self, var: usize) -> BTreeMap<u16, Poly> {
        let mut out: BTreeMap<u16, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let e = std::mem::replace(&mut m2[var], 0);
            out.entry(e).or_insert_with(|| Poly::zero(self.nvars)).terms.insert(m2, c.clone());
        }
        out
    }

    /// Coefficient of `var^e`.
    pub fn coeff_of_var_power(&self, var: usize, e: u16) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m[var] == e {
                let mut m2 = m.clone();
                m2[var] = 0;
                out.terms.insert(m2, c.clone());
            }
        }
        out
    }

    /// Moves the polynomial into a ring with `new_nvars` variables, sending
    /// variable `i` to `mapping[i]`.
    pub fn embed(&self, new_nvars: usize, mapping: &[usize]) -> Poly {
        assert_eq!(mapping.len(), self.nvars, "mapping length");
        let mut out = Poly::zero(new_nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0u16; new_nvars];
            for (i, &k) in m.iter().enumerate() {
                e[mapping[i]] += k;
            }
            out.add_term(e, c.clone());
        }
        out
    }

    /// Keeps the first `n` variables, asserting the others do not occur.
    pub fn truncate_vars(&self, n: usize) -> Poly {
        let mut out = Poly::zero(n);
        for (m, c) in &self.terms {
            assert!(m[n..].iter().all(|&e| e == 0), "dropped variable occurs in polynomial");
            out.terms.insert(m[..n].to_vec(), c.clone());
        }
        out
    }

    /// Substitutes `images[i]` for variable `i`. All images must live in the
    /// same ring.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let target = images.first().map_or(0, Poly::nvars);
        if let Some(perm) = signed_permutation(images) {
            return self.apply_signed_permutation(target, &perm);
        }
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(p.nvars()), p.clone()]).collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().expect("nonempty").mul_ref(&images[i]);
                    powers[i].push(next);
                }
                term = term.mul_ref(&powers[i][e as usize]);
                if term.is_zero() {
                    break;
                }
            }
            out.add_assign_ref(&term);
        }
        out
    }

    fn apply_signed_permutation(&self, target: usize, perm: &[(usize, bool)]) -> Poly {
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0u16; target];
            let mut negative = false;
            for (i, &k) in m.iter().enumerate() {
                let (j, neg) = perm[i];
                e[j] += k;
                negative ^= neg && k % 2 == 1;
            }
            out.add_term(e, if negative { -c.clone() } else { c.clone() });
        }
        out
    }

    /// Exact quotient by a nonzero linear form, or `None` if it does not divide.
    pub fn div_linear(&self, form: &Poly) -> Option<Poly> {
        assert_eq!(self.nvars, form.nvars, "variable count mismatch");
        if form.terms.keys().any(|m| m.iter().map(|&e| e as u32).sum::<u32>() != 1) {
            panic!("div_linear expects a homogeneous linear form");
        }
        // Pivot on the variable whose coefficient has the smallest height.
        let (pivot_mono, a) = form
            .terms
            .iter()
            .min_by_key(|(_, c)| c.numer().abs() + c.denom())
            .map(|(m, c)| (m.clone(), c.clone()))?;
        let p = pivot_mono.iter().position(|&e| e == 1).expect("linear monomial");
        let mut beta = form.clone();
        beta.terms.remove(&pivot_mono);
        let inv_a = BigRat::one() / a;

        let mut f = self.split_by_var(p);
        let Some(&top) = f.keys().next_back() else { return Some(Poly::zero(self.nvars)) };
        let mut quotient = Poly::zero(self.nvars);
        let mut carry: Option<Poly> = None; // q_k for the step above
        for k in (1..=top).rev() {
            let mut fk = f.remove(&k).unwrap_or_else(|| Poly::zero(self.nvars));
            if let Some(qk) = &carry {
                fk.sub_assign_ref(&beta.mul_ref(qk));
            }
            let qk1 = fk.scale(&inv_a);
            let mut shifted = qk1.clone();
            if k > 1 {
                let mut e = vec![0u16; self.nvars];
                e[p] = k - 1;
                shifted = shifted.mul_monomial(&e, &BigRat::one());
            }
            quotient.add_assign_ref(&shifted);
            carry = Some(qk1);
        }
        let mut rem = f.remove(&0).unwrap_or_else(|| Poly::zero(self.nvars));
        if let Some(q0) = &carry {
            rem.sub_assign_ref(&beta.mul_ref(q0));
        }
        rem.is_zero().then_some(quotient)
    }

    /// Evaluates at the origin of the listed variables and returns the
    /// constant term; convenience for Schubert pairings.
    pub fn eval_zero(&self) -> BigRat {
        self.constant_term()
    }

    /// Formats with the given variable names.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }

    /// Maps every coefficient through `f`, dropping zeros.
    pub fn map_coeffs(&self, f: impl Fn(&BigRat) -> BigRat) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }
}

/// Detects images that are each ±(single variable), returning (target, negated).
fn signed_permutation(images: &[Poly]) -> Option<Vec<(usize, bool)>> {
    images
        .iter()
        .map(|p| {
            if p.terms.len() != 1 {
                return None;
            }
            let (m, c) = p.terms.iter().next()?;
            let idx = m.iter().position(|&e| e == 1)?;
            if m.iter().map(|&e| e as u32).sum::<u32>() != 1 {
                return None;
            }
            if c.is_one() {
                Some((idx, false))
            } else if (-c).is_one() {
                Some((idx, true))
            } else {
                None
            }
        })
        .collect()
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.sub_assign_ref(rhs);
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_ref(rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-BigRat::one())
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self.sub_assign_ref(&rhs);
        self
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        self.mul_ref(&rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-BigRat::one())
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        // Highest terms first reads more naturally.
        for (k, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let n = self.names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
                    if e == 1 {
                        n
                    } else {
                        format!("{n}^{e}")
                    }
                })
                .collect();
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.display_with(&names))
    }
}
