//! Equivariant cohomology of the quintic del Pezzo threefold V₅ ⊂ Gr(2,5)
//! under SL₂. The unknown ring constant and the conormal constants are
//! solved from Whitney relations rather than hard-coded.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactmath::{rat, BigRat};
use crate::spaces::ExplicitRingModel;
use crate::weights::{Poly, PolyRing};

use super::{chern_of_tensor, chern_of_twist, total, total_product, total_quotient, CharClassError};

const U: usize = 0;
const U1: usize = 1;
const S2: usize = 2;

/// Everything derived for V₅ from the Whitney datum c(Sym⁴ℂ²) = 1 + m·s₂ + K·s₂².
#[derive(Debug, Clone)]
pub struct QuinticDerivation {
    pub whitney: (i64, i64),
    /// The constant a in u² = 5u₁ + a·s₂.
    pub ring_constant: BigRat,
    /// Right-hand side of the u₁² rule, in the ring (u, u₁, s₂).
    pub u1_squared: Poly,
    /// The constants (A, B) in the conormal Chern classes.
    pub conormal: (BigRat, BigRat),
    pub conormal_chern: Vec<Poly>,
    pub tensor_chern: Vec<Poly>,
    pub cotangent_chern: Vec<Poly>,
    pub line_class: Poly,
    /// c₄ᴳ(J(L)) before and after normal form.
    pub euler_raw: Poly,
    pub euler: Poly,
    /// ⟨c₃(J(L)), [X]⟩ from the full splitting-principle expansion.
    pub chern_number: BigRat,
    /// ⟨c₁(L)·c₂(Ω⊗L), [X]⟩, the same expansion without the c₃(Ω⊗L) term.
    pub chern_number_without_top_twist: BigRat,
    pub model: ExplicitRingModel,
}

fn ring_with(params: &[&str]) -> PolyRing {
    let mut vars: Vec<(&str, u32)> = vec![("u", 1), ("u1", 2), ("s2", 2)];
    vars.extend(params.iter().map(|p| (*p, 0)));
    PolyRing::new(&vars)
}

/// Repeatedly replaces var^power by `rhs`.
fn rewrite(p: &Poly, var: usize, power: u16, rhs: &Poly) -> Poly {
    let n = p.nvars();
    let mut out = Poly::zero(n);
    let mut todo = p.clone();
    while let Some((m, c)) = todo.leading().map(|(m, c)| (m.clone(), c.clone())) {
        let mut term = Poly::zero(n);
        term.add_term(m.clone(), c.clone());
        todo.sub_assign_ref(&term);
        if m[var] >= power {
            let mut rest = m;
            rest[var] -= power;
            todo.add_assign_ref(&rhs.mul_monomial(&rest, &c));
        } else {
            out.add_assign_ref(&term);
        }
    }
    out
}

/// Groups a polynomial by the exponents of its first `k` variables; each
/// group is a polynomial in the remaining variables.
fn coefficients_over(p: &Poly, k: usize) -> BTreeMap<Vec<u16>, Poly> {
    let rest = p.nvars() - k;
    let mut out: BTreeMap<Vec<u16>, Poly> = BTreeMap::new();
    for (m, c) in p.terms() {
        out.entry(m[..k].to_vec()).or_insert_with(|| Poly::zero(rest)).add_term(m[k..].to_vec(), c.clone());
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Univariate polynomial (coefficients by ascending power) from a Poly in
/// one variable.
fn univariate(p: &Poly) -> Vec<BigRat> {
    let deg = p.terms().map(|(m, _)| m[0] as usize).max().unwrap_or(0);
    let mut v = vec![BigRat::zero(); deg + 1];
    for (m, c) in p.terms() {
        v[m[0] as usize] += c;
    }
    trim(v)
}

fn trim(mut v: Vec<BigRat>) -> Vec<BigRat> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn uni_rem(a: &[BigRat], b: &[BigRat]) -> Vec<BigRat> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let q = &r[r.len() - 1] / &lb;
        for (i, bi) in b.iter().enumerate() {
            r[k + i] -= &q * bi;
        }
        r = trim(r);
    }
    r
}

fn uni_gcd(a: &[BigRat], b: &[BigRat]) -> Vec<BigRat> {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let r = uni_rem(&x, &y);
        x = y;
        y = r;
    }
    x
}

fn uni_eval(p: &[BigRat], x: &BigRat) -> BigRat {
    p.iter().rev().fold(BigRat::zero(), |acc, c| acc * x + c)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            out.push(&n / &d);
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    out
}

/// Distinct rational roots of a nonzero univariate polynomial.
pub(crate) fn rational_roots(p: &[BigRat]) -> Vec<BigRat> {
    let mut p = trim(p.to_vec());
    let mut roots = Vec::new();
    if p.len() <= 1 {
        return roots;
    }
    if p[0].is_zero() {
        roots.push(BigRat::zero());
        while p[0].is_zero() {
            p.remove(0);
        }
    }
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRat::from_integer(lcm.clone())).to_integer()).collect();
    if ints.len() > 1 {
        for num in divisors(&ints[0]) {
            for den in divisors(ints.last().expect("nonempty")) {
                for s in [1, -1] {
                    let x = BigRat::new(&num * s, den.clone());
                    if uni_eval(&p, &x).is_zero() && !roots.contains(&x) {
                        roots.push(x);
                    }
                }
            }
        }
    }
    roots.sort();
    roots
}

/// Common rational roots of a family of univariate polynomials.
fn common_roots(eqs: &[Vec<BigRat>]) -> Result<Vec<BigRat>, CharClassError> {
    let nonzero: Vec<&Vec<BigRat>> = eqs.iter().filter(|e| !e.is_empty()).collect();
    let Some(first) = nonzero.first() else {
        return Err(CharClassError::Derivation("equations do not determine the unknown".into()));
    };
    let g = nonzero.iter().skip(1).fold((*first).clone(), |acc, e| uni_gcd(&acc, e));
    Ok(rational_roots(&g))
}

/// Solves for the constant a in u² = 5u₁ + a·s₂ given c(Sym⁴ℂ²) = 1 + m·s₂ + K·s₂².
pub fn quintic_ring_constant(m: i64, k: i64) -> Result<BigRat, CharClassError> {
    Ok(solve_ring(m, k)?.0)
}

/// Solves for the conormal constants (A, B) given the Whitney datum.
pub fn quintic_conormal_constants(m: i64, k: i64) -> Result<(BigRat, BigRat), CharClassError> {
    Ok(QuinticDerivation::derive(m, k)?.conormal)
}

/// Chern classes of the tautological subbundle U and quotient Q in a ring
/// laid out as (u, u₁, s₂, …) with `a` given as a ring element.
fn tautological(ring: &PolyRing, a: &Poly, m: i64, k: i64) -> (Vec<Poly>, Vec<Poly>, Vec<Poly>) {
    let n = ring.nvars();
    let s2 = ring.var("s2");
    let cu = vec![ring.var("u"), &ring.var("u1").scale(&rat(2)) + &a.mul_ref(&s2).scale(&BigRat::new(1.into(), 2.into()))];
    let cs = vec![Poly::zero(n), s2.scale(&rat(m)), Poly::zero(n), s2.pow(2).scale(&rat(k))];
    let cq = total_quotient(&total(&cs, n), &total(&cu, n), 3)[1..].to_vec();
    (cu, cq, cs)
}

/// Returns (a, u₁² rule in the ring (u, u₁, s₂)).
fn solve_ring(m: i64, k: i64) -> Result<(BigRat, Poly), CharClassError> {
    let ring = ring_with(&["a"]);
    let n = ring.nvars();
    let a = ring.var("a");
    let (cu, cq, cs) = tautological(&ring, &a, m, k);
    let prod = total_product(&total(&cu, n), &total(&cq, n), 5);
    let rule1 = &ring.var("u1").scale(&rat(5)) + &a.mul_ref(&ring.var("s2"));
    // Degree 4: c(U)·c(Q) agrees with c(Sym⁴) and determines u₁².
    let d4 = rewrite(&(&prod[4] - &cs[3]), U, 2, &rule1);
    let mut lead = Poly::zero(n);
    let mut rest = Poly::zero(n);
    for (mono, c) in d4.terms() {
        if mono[U1] == 2 {
            lead.add_term(mono.clone(), c.clone());
        } else {
            rest.add_term(mono.clone(), c.clone());
        }
    }
    let gamma = {
        let mut e = vec![0u16; n];
        e[U1] = 2;
        let g = lead.coeff(&e);
        if g.is_zero() || lead.len() != 1 {
            return Err(CharClassError::Derivation("degree-4 relation does not determine u1^2".into()));
        }
        g
    };
    let rule2 = rest.scale(&-(BigRat::one() / gamma));
    // Degree 5: every coefficient of the reduced relation must vanish.
    let model = ExplicitRingModel::quintic(&["a"], |_| a.clone(), |_| rule2.clone());
    let d5 = model.normal_form(&prod[5]).map_err(CharClassError::from)?;
    let eqs: Vec<Vec<BigRat>> = coefficients_over(&d5, 3).values().map(univariate).collect();
    let roots = common_roots(&eqs)?;
    let [root] = roots.as_slice() else {
        return Err(CharClassError::Derivation(format!("expected a unique ring constant, found {}", roots.len())));
    };
    // Specialise the rule to the solved constant, dropping the parameter.
    let small = ring_with(&[]);
    let images = vec![small.var("u"), small.var("u1"), small.var("s2"), small.constant(root.clone())];
    Ok((root.clone(), rule2.substitute(&images)))
}

impl QuinticDerivation {
    pub fn derive(m: i64, k: i64) -> Result<Self, CharClassError> {
        let (a, u1_sq) = solve_ring(m, k)?;
        // Stage two: unknown conormal constants A, B as weight-0 variables.
        let ring = ring_with(&["A", "B"]);
        let n = ring.nvars();
        let embed = |p: &Poly| p.embed(n, &[0, 1, 2]);
        let u1_sq_ab = embed(&u1_sq);
        let model_ab = ExplicitRingModel::quintic(&["A", "B"], |r| r.constant(a.clone()), |_| u1_sq_ab.clone());
        let nf = |p: &Poly| model_ab.normal_form(p).map_err(CharClassError::from);
        let (cu, cq, _) = tautological(&ring, &ring.constant(a.clone()), m, k);
        let tensor: Vec<Poly> = chern_of_tensor(&cq, true, &cu, false)?.iter().map(nf).collect::<Result<_, _>>()?;
        // Ansatz: the non-equivariant part of (1 + u)³ plus unknown s₂ terms.
        let s2 = ring.var("s2");
        let base: Vec<Poly> = (1..=3)
            .map(|j| {
                let p = ring.var("u").pow(j as u32).scale(&super::binomial(3, j));
                nf(&p).map(|q| q.set_zero(&[S2]))
            })
            .collect::<Result<_, _>>()?;
        let conormal_ab = vec![
            base[0].clone(),
            &base[1] + &ring.var("A").mul_ref(&s2),
            &base[2] + &ring.var("B").mul_ref(&s2).mul_ref(&ring.var("u")),
        ];
        let omega_ab = total_quotient(&total(&tensor, n), &total(&conormal_ab, n), 3);
        let check = total_product(&omega_ab, &total(&conormal_ab, n), 6);
        let mut eqs: Vec<Poly> = Vec::new();
        for d in 4..=6 {
            let diff = nf(&(&check[d] - &tensor[d - 1]))?;
            eqs.extend(coefficients_over(&diff, 3).into_values());
        }
        let (ca, cb) = solve_ab(&eqs)?;
        // Stage three: numeric model.
        let model = ExplicitRingModel::quintic(&[], |r| r.constant(a.clone()), |_| u1_sq.clone());
        let small = ring_with(&[]);
        let sn = small.nvars();
        let images = vec![small.var("u"), small.var("u1"), small.var("s2"), small.constant(ca.clone()), small.constant(cb.clone())];
        let spec = |p: &Poly| model.normal_form(&p.substitute(&images)).map_err(CharClassError::from);
        let omega: Vec<Poly> = omega_ab[1..].iter().map(spec).collect::<Result<_, _>>()?;
        let conormal: Vec<Poly> = conormal_ab.iter().map(spec).collect::<Result<_, _>>()?;
        let tensor_num: Vec<Poly> = tensor.iter().map(spec).collect::<Result<_, _>>()?;
        let line = -omega[0].clone();
        let twisted = chern_of_twist(&omega, &line);
        let euler_raw = line.mul_ref(&twisted[2]);
        let euler = model.normal_form(&euler_raw)?;
        let jet = total_product(&[Poly::one(sn), line.clone()], &total(&twisted, sn), 3);
        let chern_number = model.fundamental_class_pairing(&jet[3])?;
        let partial = model.fundamental_class_pairing(&line.mul_ref(&twisted[1]))?;
        Ok(QuinticDerivation {
            whitney: (m, k),
            ring_constant: a,
            u1_squared: u1_sq,
            conormal: (ca, cb),
            conormal_chern: conormal,
            tensor_chern: tensor_num,
            cotangent_chern: omega,
            line_class: line,
            euler_raw,
            euler,
            chern_number,
            chern_number_without_top_twist: partial,
            model,
        })
    }
}

/// Solves polynomial equations in (A, B): one equation must be affine in B
/// with a constant coefficient; substituting it leaves univariate equations
/// in A whose unique integral common root is selected.
fn solve_ab(eqs: &[Poly]) -> Result<(BigRat, BigRat), CharClassError> {
    let b_lin = eqs.iter().find_map(|e| {
        let parts = e.split_by_var(1);
        let lin = parts.get(&1)?;
        (parts.keys().all(|&k| k <= 1) && lin.terms().all(|(m, _)| m[0] == 0)).then(|| (lin.constant_term(), parts.get(&0).cloned()))
    });
    let Some((beta, rest)) = b_lin else {
        return Err(CharClassError::Derivation("no equation is affine in B".into()));
    };
    // B = −rest(A)/β
    let b_of_a = rest.unwrap_or_else(|| Poly::zero(2)).scale(&-(BigRat::one() / &beta));
    let images = vec![Poly::var(2, 0), b_of_a.clone()];
    let uni: Vec<Vec<BigRat>> = eqs.iter().map(|e| univariate(&e.substitute(&images).truncate_vars(1))).collect();
    let roots = common_roots(&uni)?;
    let integral: Vec<&BigRat> = roots.iter().filter(|r| r.is_integer()).collect();
    let [a] = integral.as_slice() else {
        return Err(CharClassError::Derivation(format!("expected one integral solution, found {}", integral.len())));
    };
    let b = uni_eval(&univariate(&b_of_a.truncate_vars(1)), a);
    for e in eqs {
        let v = e.substitute(&[Poly::constant(2, (*a).clone()), Poly::constant(2, b.clone())]);
        if !v.is_zero() {
            return Err(CharClassError::Derivation("solution does not satisfy every equation".into()));
        }
    }
    Ok(((*a).clone(), b))
}
