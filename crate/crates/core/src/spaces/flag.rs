use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::{One, Signed, Zero};

use crate::exactmath::{rat, ratio, solve_linear, BigRat};
use crate::weights::{monomials_of_degree, CharBasis, CharVec, LatticeTag, Mono, Poly};
use crate::weylflag::{enumerate_weyl, minimal_coset_reps, schubert_pair, ParabolicQuotient, RootDatum, RootType, WeylElement};

use super::SpaceError;

/// A homogeneous space G/P together with the data the pipelines need:
/// Levi-invariant coordinates y, invariant generators of H*(BG), cotangent
/// weights at the base point and the weight of the hyperplane bundle.
#[derive(Debug)]
pub struct FlagFactor {
    name: String,
    datum: RootDatum,
    quotient: ParabolicQuotient,
    weyl_order: usize,
    y_names: Vec<String>,
    y_polys: Vec<Poly>,
    y_degrees: Vec<u32>,
    y_leads: Vec<(Mono, BigRat)>,
    invariants: Vec<(String, Poly)>,
    cotangent: Vec<CharVec>,
    omega: CharVec,
    cache: Mutex<YCache>,
}

#[derive(Debug, Default)]
struct YCache {
    /// ε-leading monomial → y-monomial, per degree already indexed.
    lead_index: HashMap<Mono, Mono>,
    indexed_degrees: Vec<u32>,
    expansions: HashMap<Mono, Poly>,
}

/// Everything needed to build a [`FlagFactor`].
struct FlagSpec {
    name: String,
    datum: RootDatum,
    levi: Vec<usize>,
    y: Vec<(String, Poly, u32)>,
    invariants: Vec<(String, Poly)>,
    cotangent_fixture: Vec<CharVec>,
    omega: CharVec,
}

fn elementary_symmetric(vars: &[Poly], k: usize, n: usize) -> Poly {
    // Coefficient extraction from Π(1 + x_i·T) done by dynamic programming.
    let mut e: Vec<Poly> = vec![Poly::one(n)];
    for x in vars {
        let mut next = e.clone();
        next.push(Poly::zero(n));
        for j in 1..next.len() {
            let add = e[j - 1].mul_ref(x);
            next[j].add_assign_ref(&add);
        }
        e = next;
    }
    e.get(k).cloned().unwrap_or_else(|| Poly::zero(n))
}

impl FlagFactor {
    fn build(spec: FlagSpec) -> Result<Self, SpaceError> {
        let group = enumerate_weyl(&spec.datum)?;
        let expected = spec.datum.root_type().weyl_order(spec.datum.rank());
        if group.len() as u64 != expected {
            return Err(SpaceError::Model(format!("{}: enumerated {} Weyl elements, expected {expected}", spec.name, group.len())));
        }
        let quotient = minimal_coset_reps(&spec.datum, &group, &spec.levi);
        let mut y_names = Vec::new();
        let mut y_polys = Vec::new();
        let mut y_degrees = Vec::new();
        let mut y_leads = Vec::new();
        for (n, p, d) in spec.y {
            let (m, c) = p.leading().ok_or_else(|| SpaceError::Model(format!("zero coordinate {n}")))?;
            y_leads.push((m.clone(), c.clone()));
            y_names.push(n);
            y_polys.push(p);
            y_degrees.push(d);
        }
        let factor = FlagFactor {
            name: spec.name,
            quotient,
            weyl_order: group.len(),
            y_names,
            y_polys,
            y_degrees,
            y_leads,
            invariants: spec.invariants,
            cotangent: Vec::new(),
            omega: spec.omega,
            cache: Mutex::new(YCache::default()),
            datum: spec.datum,
        };
        // Cotangent weights are derived from the root system and must match
        // the fixture list exactly (as multisets).
        let derived = factor.derive_cotangent(&group)?;
        let key = |v: &CharVec| v.coords().to_vec();
        let mut a: Vec<_> = derived.iter().map(key).collect();
        let mut b: Vec<_> = spec.cotangent_fixture.iter().map(key).collect();
        a.sort();
        b.sort();
        if a != b {
            return Err(SpaceError::Convention(format!("{}: cotangent weights disagree with the fixture", factor.name)));
        }
        Ok(FlagFactor { cotangent: spec.cotangent_fixture, ..factor })
    }

    /// Negatives of the positive roots outside the Levi subsystem.
    fn derive_cotangent(&self, group: &crate::weylflag::WeylGroup) -> Result<Vec<CharVec>, SpaceError> {
        let basis = self.datum.basis();
        let free = basis.free_symbols();
        let rank = self.datum.rank();
        let simple: Vec<Vec<BigRat>> = (0..rank).map(|i| poly_coords(self.datum.root_poly(i), free.len())).collect();
        let mut roots: Vec<Vec<BigRat>> = Vec::new();
        for w in group.elements() {
            for i in 0..rank {
                let r = poly_coords(&self.datum.root_poly(i).substitute(w.images()), free.len());
                if !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
        let mut out = Vec::new();
        for r in roots {
            // Express the root in simple roots: columns = simple roots.
            let a: Vec<Vec<BigRat>> = (0..free.len()).map(|v| simple.iter().map(|s| s[v].clone()).collect()).collect();
            let x = solve_linear(&a, &r)
                .map_err(|e| SpaceError::Model(e.to_string()))?
                .ok_or_else(|| SpaceError::Model("root outside the span of simple roots".into()))?;
            let positive = x.iter().all(|c| !c.is_negative());
            let in_levi = x.iter().enumerate().all(|(i, c)| c.is_zero() || self.quotient.levi.contains(&i));
            if positive && !in_levi {
                let mut coords = vec![BigRat::zero(); basis.len()];
                for (k, &f) in free.iter().enumerate() {
                    coords[f] = -r[k].clone();
                }
                out.push(basis.vector(coords, LatticeTag::Integer)?);
            }
        }
        Ok(out)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn quotient(&self) -> &ParabolicQuotient {
        &self.quotient
    }

    pub fn reps(&self) -> &[WeylElement] {
        &self.quotient.reps
    }

    pub fn weyl_order(&self) -> usize {
        self.weyl_order
    }

    pub fn dim(&self) -> usize {
        self.quotient.top().length()
    }

    pub fn torus_nvars(&self) -> usize {
        self.datum.nvars()
    }

    pub fn torus_names(&self) -> Vec<String> {
        self.datum.basis().free_names()
    }

    pub fn y_names(&self) -> &[String] {
        &self.y_names
    }

    pub fn y_degrees(&self) -> &[u32] {
        &self.y_degrees
    }

    pub fn y_polys(&self) -> &[Poly] {
        &self.y_polys
    }

    /// Standard invariant generators of H*(BG) for the group acting on this
    /// factor, as polynomials in the torus variables.
    pub fn invariants(&self) -> &[(String, Poly)] {
        &self.invariants
    }

    pub fn cotangent(&self) -> &[CharVec] {
        &self.cotangent
    }

    pub fn omega(&self) -> &CharVec {
        &self.omega
    }

    pub fn basis(&self) -> &CharBasis {
        self.datum.basis()
    }

    pub fn char_poly(&self, v: &CharVec) -> Poly {
        self.datum.basis().to_poly(v)
    }

    /// Substitutes the torus expressions of the y coordinates.
    pub fn from_y(&self, p: &Poly) -> Poly {
        p.substitute(&self.y_polys)
    }

    fn y_lead(&self, a: &Mono) -> (Mono, BigRat) {
        let n = self.torus_nvars();
        let mut m = vec![0u16; n];
        let mut c = BigRat::one();
        for (i, &e) in a.iter().enumerate() {
            if e == 0 {
                continue;
            }
            for (k, &x) in self.y_leads[i].0.iter().enumerate() {
                m[k] += x * e;
            }
            for _ in 0..e {
                c *= &self.y_leads[i].1;
            }
        }
        (m, c)
    }

    fn y_expansion(&self, cache: &mut YCache, a: &Mono) -> Poly {
        if let Some(p) = cache.expansions.get(a) {
            return p.clone();
        }
        let p = match a.iter().position(|&e| e > 0) {
            None => Poly::one(self.torus_nvars()),
            Some(i) => {
                let mut smaller = a.clone();
                smaller[i] -= 1;
                self.y_expansion(cache, &smaller).mul_ref(&self.y_polys[i])
            }
        };
        cache.expansions.insert(a.clone(), p.clone());
        p
    }

    /// Rewrites a Levi-invariant polynomial in the torus variables as a
    /// polynomial in y, by repeatedly cancelling the leading monomial.
    pub fn to_y(&self, p: &Poly) -> Result<Poly, SpaceError> {
        let m = self.y_names.len();
        let mut rest = p.clone();
        let mut out = Poly::zero(m);
        let mut cache = self.cache.lock().expect("cache lock");
        while let Some((lead, c)) = rest.leading().map(|(a, b)| (a.clone(), b.clone())) {
            let d: u32 = lead.iter().map(|&e| e as u32).sum();
            if !cache.indexed_degrees.contains(&d) {
                for a in monomials_of_degree(&self.y_degrees, d) {
                    let (lm, _) = self.y_lead(&a);
                    cache.lead_index.insert(lm, a);
                }
                cache.indexed_degrees.push(d);
            }
            let a = cache
                .lead_index
                .get(&lead)
                .cloned()
                .ok_or_else(|| SpaceError::NotInvariant(format!("{}: no y-monomial with leading term {:?}", self.name, lead)))?;
            let (_, lc) = self.y_lead(&a);
            let k = &c / &lc;
            let exp = self.y_expansion(&mut cache, &a);
            rest.add_scaled(&exp, &-k.clone());
            out.add_term(a, k);
        }
        Ok(out)
    }

    /// ⟨α*(p), e_w⟩ for a torus polynomial p.
    pub fn pair(&self, p: &Poly, w: &WeylElement) -> Result<BigRat, SpaceError> {
        Ok(schubert_pair(&self.datum, p, w)?)
    }

    /// Lagrangian Grassmannian LGr(n, 2n) for Sp_{2n} (n = 3 in practice).
    pub fn lagrangian(n: usize) -> Result<Self, SpaceError> {
        let syms: Vec<String> = (1..=n).map(|i| format!("e{i}")).collect();
        let basis = CharBasis::new(&syms.iter().map(String::as_str).collect::<Vec<_>>());
        let unit = |i: usize| basis.unit(i);
        let mut roots = type_a_roots(n);
        let mut last = vec![0i64; n];
        last[n - 1] = -2;
        roots.push(last);
        let datum = RootDatum::orthonormal(RootType::C, basis.clone(), roots)?;
        let vars: Vec<Poly> = (0..n).map(|i| Poly::var(n, i)).collect();
        let w: Vec<Poly> = (1..=n).map(|k| elementary_symmetric(&vars, k, n)).collect();
        let squares: Vec<Poly> = vars.iter().map(|v| v.mul_ref(v)).collect();
        let invariants = (1..=n)
            .map(|k| (format!("s{k}"), elementary_symmetric(&squares, k, n).scale(&rat(if k % 2 == 1 { -1 } else { 1 }))))
            .collect();
        let mut cot = Vec::new();
        for i in 0..n {
            for j in i..n {
                cot.push(basis.add(&unit(i), &unit(j))?);
            }
        }
        let omega = basis.from_ints(&vec![-1; n]);
        Self::build(FlagSpec {
            name: format!("LGr({n},{})", 2 * n),
            datum,
            levi: (0..n - 1).collect(),
            y: w.into_iter().enumerate().map(|(k, p)| (format!("w{}", k + 1), p, k as u32 + 1)).collect(),
            invariants,
            cotangent_fixture: cot,
            omega,
        })
    }

    /// Spinor variety OGr₊(n, 2n) for Spin_{2n} (n = 5 in practice).
    pub fn spinor(n: usize) -> Result<Self, SpaceError> {
        let syms: Vec<String> = (1..=n).map(|i| format!("e{i}")).collect();
        let basis = CharBasis::new(&syms.iter().map(String::as_str).collect::<Vec<_>>());
        let unit = |i: usize| basis.unit(i);
        let mut roots = type_a_roots(n);
        let mut last = vec![0i64; n];
        last[n - 2] = -1;
        last[n - 1] = -1;
        roots.push(last);
        let datum = RootDatum::orthonormal(RootType::D, basis.clone(), roots)?;
        let vars: Vec<Poly> = (0..n).map(|i| Poly::var(n, i)).collect();
        let w: Vec<Poly> = (1..=n).map(|k| elementary_symmetric(&vars, k, n)).collect();
        let squares: Vec<Poly> = vars.iter().map(|v| v.mul_ref(v)).collect();
        let mut invariants: Vec<(String, Poly)> = (1..n)
            .map(|k| (format!("s{k}"), elementary_symmetric(&squares, k, n).scale(&rat(if k % 2 == 1 { -1 } else { 1 }))))
            .collect();
        invariants.push(("s".to_string(), w[n - 1].clone()));
        let mut cot = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                cot.push(basis.add(&unit(i), &unit(j))?);
            }
        }
        let omega = basis
            .vector(vec![ratio(-1, 2); n], LatticeTag::Spin { block: (0..n).collect() })?;
        Self::build(FlagSpec {
            name: format!("OGr+({n},{})", 2 * n),
            datum,
            levi: (0..n - 1).collect(),
            y: w.into_iter().enumerate().map(|(k, p)| (format!("w{}", k + 1), p, k as u32 + 1)).collect(),
            invariants,
            cotangent_fixture: cot,
            omega,
        })
    }

    /// The five-dimensional G₂-Grassmannian G₂/P₁.
    pub fn g2() -> Result<Self, SpaceError> {
        let basis = CharBasis::with_relations(&["e1", "e2", "e3"], &[vec![rat(1), rat(1), rat(1)]])?;
        let v = |c: [i64; 3]| basis.from_ints(&c);
        let roots = vec![v([0, 1, 0]), v([1, -1, 0])];
        let images = vec![
            vec![v([1, 1, 0]), v([0, -1, 0]), v([0, 1, 1])],
            vec![v([0, 1, 0]), v([1, 0, 0]), v([0, 0, 1])],
        ];
        let datum = RootDatum::from_images(RootType::G2, basis.clone(), roots, images)?;
        let p = |c: [i64; 3]| basis.to_poly(&v(c));
        let (e1, e2, e3) = (p([1, 0, 0]), p([0, 1, 0]), p([0, 0, 1]));
        let y = vec![
            ("a".to_string(), p([1, 0, -1]), 1),
            ("b".to_string(), e2.mul_ref(&e2), 2),
        ];
        let s1 = &(&e1.mul_ref(&e1) + &e2.mul_ref(&e2)) + &e3.mul_ref(&e3);
        let prod = e1.mul_ref(&e2).mul_ref(&e3);
        let invariants = vec![("s1".to_string(), s1), ("s2".to_string(), prod.mul_ref(&prod))];
        let cot = vec![v([-1, 1, 0]), v([-1, 0, 0]), v([0, 0, 1]), v([0, -1, 1]), v([-1, 0, 1])];
        Self::build(FlagSpec {
            name: "G2/P1".to_string(),
            datum,
            levi: vec![0],
            y,
            invariants,
            cotangent_fixture: cot,
            omega: v([1, 0, -1]),
        })
    }

    /// Grassmannian Gr(k, n) for GL_n, or SL_n when `special`.
    pub fn grassmannian(k: usize, n: usize, special: bool) -> Result<Self, SpaceError> {
        assert!(0 < k && k < n, "need 0 < k < n");
        let syms: Vec<String> = (1..=n).map(|i| format!("e{i}")).collect();
        let names: Vec<&str> = syms.iter().map(String::as_str).collect();
        let basis = if special {
            CharBasis::with_relations(&names, &[vec![rat(1); n]])?
        } else {
            CharBasis::new(&names)
        };
        let unit = |i: usize| basis.unit(i);
        let datum = RootDatum::orthonormal(RootType::A, basis.clone(), type_a_roots(n))?;
        let eps = basis.symbol_polys();
        let nv = basis.free_symbols().len();
        let mut y = Vec::new();
        for j in 1..=k {
            y.push((format!("a{j}"), elementary_symmetric(&eps[..k], j, nv), j as u32));
        }
        for j in 1..=n - k {
            if special && j == 1 {
                continue;
            }
            y.push((format!("b{j}"), elementary_symmetric(&eps[k..], j, nv), j as u32));
        }
        let invariants = (1..=n)
            .filter(|&j| !(special && j == 1))
            .map(|j| (format!("s{j}"), elementary_symmetric(&eps, j, nv)))
            .collect();
        let mut cot = Vec::new();
        for i in 0..k {
            for j in k..n {
                cot.push(basis.sub(&unit(i), &unit(j))?);
            }
        }
        let mut om = vec![0i64; n];
        for c in om.iter_mut().take(k) {
            *c = -1;
        }
        let levi = (0..n - 1).filter(|&i| i != k - 1).collect();
        Self::build(FlagSpec {
            name: format!("Gr({k},{n})"),
            datum,
            levi,
            y,
            invariants,
            cotangent_fixture: cot,
            omega: basis.from_ints(&om),
        })
    }

    /// Odd-dimensional quadric SO_{2n+1}/P₁ of dimension 2n − 1.
    pub fn odd_quadric(n: usize) -> Result<Self, SpaceError> {
        assert!(n >= 2, "need rank at least 2");
        let syms: Vec<String> = (1..=n).map(|i| format!("e{i}")).collect();
        let basis = CharBasis::new(&syms.iter().map(String::as_str).collect::<Vec<_>>());
        let unit = |i: usize| basis.unit(i);
        let mut roots = type_a_roots(n);
        let mut last = vec![0i64; n];
        last[n - 1] = -1;
        roots.push(last);
        let datum = RootDatum::orthonormal(RootType::B, basis.clone(), roots)?;
        let vars: Vec<Poly> = (0..n).map(|i| Poly::var(n, i)).collect();
        let squares: Vec<Poly> = vars.iter().map(|v| v.mul_ref(v)).collect();
        let mut y = vec![("h".to_string(), vars[0].clone(), 1)];
        for j in 1..n {
            y.push((format!("q{j}"), elementary_symmetric(&squares[1..], j, n), 2 * j as u32));
        }
        let invariants = (1..=n).map(|j| (format!("s{j}"), elementary_symmetric(&squares, j, n))).collect();
        let mut cot = vec![unit(0)];
        for j in 1..n {
            cot.push(basis.sub(&unit(0), &unit(j))?);
            cot.push(basis.add(&unit(0), &unit(j))?);
        }
        let mut om = vec![0i64; n];
        om[0] = -1;
        Self::build(FlagSpec {
            name: format!("Q{}", 2 * n - 1),
            datum,
            levi: (1..n).collect(),
            y,
            invariants,
            cotangent_fixture: cot,
            omega: basis.from_ints(&om),
        })
    }
}

/// Ambient coordinates of e_{i+1} − e_i for i < n − 1.
fn type_a_roots(n: usize) -> Vec<Vec<i64>> {
    (0..n - 1)
        .map(|i| {
            let mut r = vec![0i64; n];
            r[i] = -1;
            r[i + 1] = 1;
            r
        })
        .collect()
}

/// Coefficients of a linear polynomial.
fn poly_coords(p: &Poly, n: usize) -> Vec<BigRat> {
    (0..n)
        .map(|i| {
            let mut e = vec![0u16; n];
            e[i] = 1;
            p.coeff(&e)
        })
        .collect()
}
