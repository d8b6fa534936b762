use std::sync::Arc;

use num_traits::Zero;

use crate::exactmath::{rat, BigRat};
use crate::weights::{CharVec, Poly, PolyRing};

use super::{FlagFactor, HomologyClass, SpaceError};

/// What sits over the flag factor.
#[derive(Debug, Clone)]
pub enum FiberSpec {
    /// The flag variety itself.
    Point,
    /// The Cayley trick fiber ℙ^{r−1} of a trivial rank-r bundle twisted by a
    /// line bundle, with GL_r (or SL_r when `special`) acting on the fiber.
    Cayley { rank: usize, special: bool },
    /// ℙ(ℰ) for a rank-2 bundle ℰ with c₁ᴳ(ℰ) = ζ·zeta + χ and c₂ᴳ(ℰ) = 0,
    /// where ζ generates the characters of an extra ℂ^× factor.
    Bundle { zeta: i64, chi: CharVec },
}

/// Cohomology of a flag factor, optionally with a projective fiber on top.
///
/// Ring variables: the y coordinates of the base, then the pure group
/// generators of the fiber group (t₁…t_r or ζ), then the fiber class
/// (u or c).
#[derive(Debug, Clone)]
pub struct TowerModel {
    base: Arc<FlagFactor>,
    fiber: FiberSpec,
    ring: PolyRing,
    n_y: usize,
    pure: Vec<usize>,
    fiber_var: Option<usize>,
    rank: usize,
    /// Replacement for fiber_var^rank.
    relation: Option<Poly>,
}

impl TowerModel {
    pub fn new(base: Arc<FlagFactor>, fiber: FiberSpec) -> Result<Self, SpaceError> {
        let mut names: Vec<String> = base.y_names().to_vec();
        let mut weights: Vec<u32> = base.y_degrees().to_vec();
        let n_y = names.len();
        let mut pure = Vec::new();
        let (fiber_var, rank) = match &fiber {
            FiberSpec::Point => (None, 1),
            FiberSpec::Cayley { rank, special } => {
                for i in 1..=*rank {
                    if *special && i == 1 {
                        continue;
                    }
                    pure.push(names.len());
                    names.push(format!("t{i}"));
                    weights.push(i as u32);
                }
                names.push("u".into());
                weights.push(1);
                (Some(names.len() - 1), *rank)
            }
            FiberSpec::Bundle { .. } => {
                pure.push(names.len());
                names.push("zeta".into());
                weights.push(1);
                names.push("c".into());
                weights.push(1);
                (Some(names.len() - 1), 2)
            }
        };
        for n in &names[..n_y] {
            if ["u", "c", "zeta"].contains(&n.as_str()) || n.starts_with('t') {
                return Err(SpaceError::Model(format!("coordinate name {n} clashes with fiber variables")));
            }
        }
        let ring = PolyRing::from_parts(names, weights);
        let mut model = TowerModel { base, fiber, ring, n_y, pure, fiber_var, rank, relation: None };
        model.relation = model.build_relation()?;
        Ok(model)
    }

    fn build_relation(&self) -> Result<Option<Poly>, SpaceError> {
        let n = self.ring.nvars();
        match &self.fiber {
            FiberSpec::Point => Ok(None),
            FiberSpec::Cayley { rank, .. } => {
                // u^r = Σ_{i≥1} (−1)^{i+1} t_i u^{r−i}
                let u = self.fiber_var.expect("fiber variable");
                let mut rhs = Poly::zero(n);
                for i in 1..=*rank {
                    let Some(t) = self.t_var(i) else { continue };
                    let mut e = vec![0u16; n];
                    e[t] = 1;
                    e[u] = (rank - i) as u16;
                    rhs.add_term(e, rat(if i % 2 == 1 { 1 } else { -1 }));
                }
                Ok(Some(rhs))
            }
            FiberSpec::Bundle { .. } => {
                // c² = −c₁(ℰ)·c
                let c = Poly::var(n, self.fiber_var.expect("fiber variable"));
                Ok(Some(-(self.bundle_c1()?.mul_ref(&c))))
            }
        }
    }

    /// c₁ᴳ(ℰ) of a bundle fiber, as a ring element.
    pub fn bundle_c1(&self) -> Result<Poly, SpaceError> {
        let FiberSpec::Bundle { zeta, chi } = &self.fiber else {
            return Err(SpaceError::Model("not a bundle model".into()));
        };
        let chi_y = self.lift_y(&self.base.to_y(&self.base.char_poly(chi))?);
        let z = Poly::var(self.ring.nvars(), self.pure[0]).scale(&rat(*zeta));
        Ok(&z + &chi_y)
    }

    pub fn base(&self) -> &FlagFactor {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<FlagFactor> {
        &self.base
    }

    pub fn fiber(&self) -> &FiberSpec {
        &self.fiber
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    /// Ring indices of pure group variables (t's or ζ).
    pub fn pure_vars(&self) -> &[usize] {
        &self.pure
    }

    pub fn fiber_var(&self) -> Option<usize> {
        self.fiber_var
    }

    /// Rank of the fiber module: number of fiber powers in a normal form.
    pub fn fiber_rank(&self) -> usize {
        self.rank
    }

    pub fn t_var(&self, i: usize) -> Option<usize> {
        self.ring.index(&format!("t{i}")).filter(|_| matches!(self.fiber, FiberSpec::Cayley { .. }))
    }

    pub fn dim(&self) -> usize {
        self.base.dim() + self.rank - 1
    }

    /// Sign s with α*(fiber class) = s·(hyperplane class of the fiber).
    pub fn fiber_sign(&self) -> i64 {
        match self.fiber {
            FiberSpec::Cayley { .. } => -1,
            _ => 1,
        }
    }

    /// Embeds a polynomial in the y coordinates into the model ring.
    pub fn lift_y(&self, p: &Poly) -> Poly {
        p.embed(self.ring.nvars(), &(0..self.n_y).collect::<Vec<_>>())
    }

    /// Converts a polynomial in (torus variables, extra ring variables) into
    /// the model ring. `extra[k]` is the ring index of extra variable k.
    pub fn lift_mixed(&self, p: &Poly, extra: &[usize]) -> Result<Poly, SpaceError> {
        let nt = self.base.torus_nvars();
        assert_eq!(p.nvars(), nt + extra.len(), "mixed polynomial layout");
        let n = self.ring.nvars();
        // Group by the exponents of the extra variables.
        let mut groups: std::collections::BTreeMap<Vec<u16>, Poly> = std::collections::BTreeMap::new();
        for (m, c) in p.terms() {
            let key = m[nt..].to_vec();
            groups.entry(key).or_insert_with(|| Poly::zero(nt)).add_term(m[..nt].to_vec(), c.clone());
        }
        let mut out = Poly::zero(n);
        for (key, coeff) in groups {
            let y = self.lift_y(&self.base.to_y(&coeff)?);
            let mut e = vec![0u16; n];
            for (k, &x) in key.iter().enumerate() {
                e[extra[k]] += x;
            }
            out.add_assign_ref(&y.mul_monomial(&e, &BigRat::from_integer(1.into())));
        }
        Ok(out)
    }

    /// Reduces the fiber-variable degree below the fiber rank.
    pub fn normal_form(&self, x: &Poly) -> Poly {
        let (Some(v), Some(rel)) = (self.fiber_var, &self.relation) else { return x.clone() };
        let r = self.rank as u16;
        let mut parts = x.split_by_var(v);
        while let Some((&top, _)) = parts.iter().next_back() {
            if top < r {
                break;
            }
            let coeff = parts.remove(&top).expect("present");
            // coeff·v^top = coeff·v^{top−r}·rel
            let expanded = coeff.mul_ref(rel);
            for (e, p) in expanded.split_by_var(v) {
                let slot = parts.entry(e + top - r).or_insert_with(|| Poly::zero(x.nvars()));
                slot.add_assign_ref(&p);
                if slot.is_zero() {
                    parts.remove(&(e + top - r));
                }
            }
        }
        let mut out = Poly::zero(x.nvars());
        for (e, p) in parts {
            let mut m = vec![0u16; x.nvars()];
            m[v] = e;
            out.add_assign_ref(&p.mul_monomial(&m, &BigRat::from_integer(1.into())));
        }
        out
    }

    /// Coefficient of fiber^j in a normal form, as a polynomial in y only.
    pub fn fiber_coefficient(&self, nf: &Poly, j: usize) -> Poly {
        let base = match self.fiber_var {
            Some(v) => nf.coeff_of_var_power(v, j as u16),
            None if j == 0 => nf.clone(),
            None => Poly::zero(nf.nvars()),
        };
        base.truncate_vars(self.n_y)
    }

    /// Homology classes (coset representative, fiber power) of complex
    /// degree `k`, ordered by representative then fiber power.
    pub fn homology_basis(&self, k: usize) -> Vec<HomologyClass> {
        let mut out = Vec::new();
        for (i, w) in self.base.reps().iter().enumerate() {
            for j in 0..self.rank {
                if w.length() + j == k {
                    out.push(HomologyClass::Schubert { rep: i, fiber: j });
                }
            }
        }
        out
    }

    /// ⟨α*(x), class⟩: the class is reduced to normal form, pure group
    /// variables are set to zero and the base coefficient is paired by BGG.
    pub fn pair(&self, x: &Poly, class: &HomologyClass) -> Result<BigRat, SpaceError> {
        let HomologyClass::Schubert { rep, fiber } = class else {
            return Err(SpaceError::Model("explicit class used with a tower model".into()));
        };
        let nf = self.normal_form(x).set_zero(&self.pure);
        self.pair_fiber_coefficient(&self.fiber_coefficient(&nf, *fiber), *rep, *fiber)
    }

    /// Pairs a y-polynomial sitting in front of fiber^j against (rep, j).
    pub fn pair_fiber_coefficient(&self, y_poly: &Poly, rep: usize, j: usize) -> Result<BigRat, SpaceError> {
        let w = &self.base.reps()[rep];
        let deg = w.length() as u32;
        let part = y_poly.homogeneous_part(self.base.y_degrees(), deg);
        if part.is_zero() {
            return Ok(BigRat::zero());
        }
        let torus = self.base.from_y(&part);
        let v = self.base.pair(&torus, w)?;
        Ok(if self.fiber_sign() < 0 && j % 2 == 1 { -v } else { v })
    }

    /// Pairing with the fundamental class.
    pub fn fundamental_class_pairing(&self, x: &Poly) -> Result<BigRat, SpaceError> {
        let top = self.base.reps().len() - 1;
        let class = HomologyClass::Schubert { rep: top, fiber: self.rank - 1 };
        debug_assert_eq!(self.base.reps()[top].length(), self.base.dim());
        self.pair(x, &class)
    }
}
