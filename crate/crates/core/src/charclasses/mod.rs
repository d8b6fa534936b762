//! Equivariant characteristic classes: jet-bundle Euler classes as weight
//! products, Chern numbers, twists by line bundles and tensor products via
//! the splitting principle.

mod quintic;
mod symmetric;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactmath::{rat, BigRat};
use crate::spaces::{FiberSpec, FlagFactor, SpaceError, TowerModel};
use crate::weights::{CharVec, Poly};

pub use quintic::{quintic_conormal_constants, quintic_ring_constant, QuinticDerivation};
pub use symmetric::{chern_of_tensor, elementary_symmetric_reduce};

/// Errors raised while deriving characteristic classes.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CharClassError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("derivation failed: {0}")]
    Derivation(String),
    #[error("weight count {found} does not equal rank {expected} of the jet bundle")]
    WeightCount { found: usize, expected: usize },
}

/// The line bundle whose jet bundle is studied.
///
/// On a flag factor the weight at the base point is `twist·ω`; on a Cayley
/// fiber the bundle is additionally tensored with 𝒪(1) of the fiber; on a
/// projective bundle c₁ᴳ(L) = `twist`·c.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LineBundleSpec {
    pub twist: i64,
}

/// Cotangent weights at the base point, validated against the fixture when
/// the flag factor was built.
pub fn cotangent_weights(factor: &FlagFactor) -> Vec<CharVec> {
    factor.cotangent().to_vec()
}

/// Jet-bundle weights of a tower model, split into a part written in torus
/// variables plus extra ring variables, and the symmetric Cayley part.
#[derive(Debug, Clone)]
pub struct JetWeights {
    /// Ring indices of the extra variables appended after the torus ones.
    pub extras: Vec<usize>,
    /// Linear forms in (torus variables, extras).
    pub factors: Vec<Poly>,
    /// For a Cayley fiber: the rank r and λ₀ in y coordinates; stands for
    /// the r weights λ₀ − ζᵢ.
    pub cayley: Option<(usize, Poly)>,
}

impl JetWeights {
    pub fn count(&self) -> usize {
        self.factors.len() + self.cayley.as_ref().map_or(0, |(r, _)| *r)
    }
}

/// Weights of J(L) at the base point of a tower model.
pub fn jet_weights(model: &TowerModel, line: LineBundleSpec) -> Result<JetWeights, CharClassError> {
    let base = model.base();
    let nt = base.torus_nvars();
    let twist = rat(line.twist);
    let lambda0 = base.char_poly(&base.basis().scale(base.omega(), &twist));
    let cot: Vec<Poly> = cotangent_weights(base).iter().map(|v| base.char_poly(v)).collect();
    let out = match model.fiber() {
        FiberSpec::Point => {
            let mut factors = vec![lambda0.clone()];
            factors.extend(cot.iter().map(|m| m + &lambda0));
            JetWeights { extras: vec![], factors, cayley: None }
        }
        FiberSpec::Cayley { rank, .. } => {
            let u = model.fiber_var().expect("Cayley fiber variable");
            let n = nt + 1;
            let lam = lambda0.embed(n, &(0..nt).collect::<Vec<_>>());
            let uu = Poly::var(n, nt);
            let factors = cot.iter().map(|m| &(&m.embed(n, &(0..nt).collect::<Vec<_>>()) + &lam) - &uu).collect();
            let lam_y = model.lift_y(&base.to_y(&lambda0)?);
            JetWeights { extras: vec![u], factors, cayley: Some((*rank, lam_y)) }
        }
        FiberSpec::Bundle { zeta, chi } => {
            // Extras: ζ then c.
            let n = nt + 2;
            let emb = |p: &Poly| p.embed(n, &(0..nt).collect::<Vec<_>>());
            let c = Poly::var(n, nt + 1);
            let z = Poly::var(n, nt);
            let l = c.scale(&twist);
            let c1e = &z.scale(&rat(*zeta)) + &emb(&base.char_poly(chi));
            let mut factors = vec![l.clone()];
            factors.extend(cot.iter().map(|m| &emb(m) + &l));
            // Relative cotangent ⊗ L: −2c + c₁(ℰ*) + c₁(L).
            factors.push(&(&l - &c.scale(&rat(2))) - &c1e);
            let zi = model.pure_vars()[0];
            JetWeights { extras: vec![zi, model.fiber_var().expect("bundle fiber variable")], factors, cayley: None }
        }
    };
    let expected = model.dim() + 1;
    if out.count() != expected {
        return Err(CharClassError::WeightCount { found: out.count(), expected });
    }
    Ok(out)
}

fn product(factors: &[Poly], n: usize) -> Poly {
    factors.iter().fold(Poly::one(n), |acc, f| acc.mul_ref(f))
}

/// Elementary symmetric polynomials e₀..e_k of the given linear forms.
pub fn elementary_of_weights(factors: &[Poly], n: usize, k: usize) -> Vec<Poly> {
    let mut e = vec![Poly::zero(n); k + 1];
    e[0] = Poly::one(n);
    for f in factors {
        for j in (1..=k).rev() {
            let add = e[j - 1].mul_ref(f);
            e[j].add_assign_ref(&add);
        }
    }
    e
}

/// Part A: Π(λ₀ − ζᵢ) = Σ (−1)ⁱ tᵢ λ₀^{r−i}, with t₀ = 1 and absent tᵢ zero.
fn cayley_part(model: &TowerModel, rank: usize, lam: &Poly) -> Poly {
    let n = model.ring().nvars();
    let mut out = Poly::zero(n);
    for i in 0..=rank {
        let t = if i == 0 {
            Poly::one(n)
        } else {
            match model.t_var(i) {
                Some(v) => Poly::var(n, v),
                None => continue,
            }
        };
        let term = t.mul_ref(&lam.pow((rank - i) as u32));
        if i % 2 == 0 {
            out.add_assign_ref(&term);
        } else {
            out.sub_assign_ref(&term);
        }
    }
    out
}

/// Equivariant Euler class of J(L) in the model ring, in normal form.
pub fn jet_euler(model: &TowerModel, line: LineBundleSpec) -> Result<Poly, CharClassError> {
    let w = jet_weights(model, line)?;
    let nt = model.base().torus_nvars();
    let mixed = product(&w.factors, nt + w.extras.len());
    let mut e = model.lift_mixed(&mixed, &w.extras)?;
    if let Some((r, lam)) = &w.cayley {
        e = e.mul_ref(&cayley_part(model, *r, lam));
    }
    Ok(model.normal_form(&e))
}

/// ⟨c_d(J(L)), [X]⟩ where d is the dimension of the total space.
pub fn chern_number(model: &TowerModel, line: LineBundleSpec) -> Result<BigRat, CharClassError> {
    let w = jet_weights(model, line)?;
    let d = model.dim();
    let nt = model.base().torus_nvars();
    let n = nt + w.extras.len();
    let e = elementary_of_weights(&w.factors, n, d);
    let lift = |p: &Poly| model.lift_mixed(p, &w.extras);
    let top = match &w.cayley {
        None => lift(&e[d])?,
        Some((r, lam)) => {
            // Pure variables vanish in the pairing, so the Cayley weights
            // contribute (T + λ₀)^r.
            let mut acc = model.ring().zero();
            for k in 0..=(*r).min(d) {
                if d - k >= e.len() {
                    continue;
                }
                let part = lift(&e[d - k])?.mul_ref(&lam.pow(k as u32)).scale(&binomial(*r, k));
                acc.add_assign_ref(&part);
            }
            acc
        }
    };
    Ok(model.fundamental_class_pairing(&top)?)
}

/// Binomial coefficient as a rational.
pub fn binomial(n: usize, k: usize) -> BigRat {
    if k > n {
        return BigRat::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    BigRat::new(num, den)
}

/// Chern classes c₁..c_r of V ⊗ ℓ from those of V (rank r):
/// c_k(V⊗ℓ) = Σ_j C(r−j, k−j) c_j(V) ℓ^{k−j}.
pub fn chern_of_twist(chern: &[Poly], line: &Poly) -> Vec<Poly> {
    let r = chern.len();
    let n = line.nvars();
    let c = |j: usize| if j == 0 { Poly::one(n) } else { chern[j - 1].clone() };
    (1..=r)
        .map(|k| {
            let mut acc = Poly::zero(n);
            for j in 0..=k {
                let term = c(j).mul_ref(&line.pow((k - j) as u32)).scale(&binomial(r - j, k - j));
                acc.add_assign_ref(&term);
            }
            acc
        })
        .collect()
}

/// Total Chern class 1 + c₁ + … as a list starting with 1.
pub fn total(chern: &[Poly], n: usize) -> Vec<Poly> {
    let mut out = vec![Poly::one(n)];
    out.extend(chern.iter().cloned());
    out
}

/// Product of total Chern classes truncated to degree `max`.
pub fn total_product(a: &[Poly], b: &[Poly], max: usize) -> Vec<Poly> {
    let n = a.first().or(b.first()).map_or(0, Poly::nvars);
    let mut out = vec![Poly::zero(n); max + 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j <= max {
                let p = x.mul_ref(y);
                out[i + j].add_assign_ref(&p);
            }
        }
    }
    out
}

/// a / b for total Chern classes (b₀ = 1) truncated to degree `max`.
pub fn total_quotient(a: &[Poly], b: &[Poly], max: usize) -> Vec<Poly> {
    let n = a.first().or(b.first()).map_or(0, Poly::nvars);
    let get = |v: &[Poly], i: usize| v.get(i).cloned().unwrap_or_else(|| Poly::zero(n));
    let mut q: Vec<Poly> = Vec::with_capacity(max + 1);
    for k in 0..=max {
        let mut acc = get(a, k);
        for j in 1..=k {
            let p = get(b, j).mul_ref(&q[k - j]);
            acc.sub_assign_ref(&p);
        }
        q.push(acc);
    }
    q
}
