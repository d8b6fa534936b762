use num_traits::Zero;

use crate::exactmath::{rat, BigRat};
use crate::weights::{Poly, PolyRing};

use super::{HomologyClass, SpaceError};

/// A rewrite rule var^power → replacement.
#[derive(Debug, Clone)]
pub struct RewriteRule {
    pub var: usize,
    pub power: u16,
    pub replacement: Poly,
}

/// One element of the module basis over the coefficient ring, with the
/// homology class dual to its non-equivariant image.
#[derive(Debug, Clone)]
pub struct ModuleBasisElement {
    pub exps: Vec<u16>,
    pub label: String,
    /// Complex degree of the dual homology class.
    pub degree: usize,
    /// ⟨α*(element), label⟩.
    pub pairing: BigRat,
}

/// A ring given by generators and rewrite rules, free over a polynomial
/// coefficient ring generated by the pure group variables.
#[derive(Debug, Clone)]
pub struct ExplicitRingModel {
    ring: PolyRing,
    rules: Vec<RewriteRule>,
    basis: Vec<ModuleBasisElement>,
    pure: Vec<usize>,
    dim: usize,
}

impl ExplicitRingModel {
    pub fn new(
        ring: PolyRing,
        rules: Vec<RewriteRule>,
        basis: Vec<ModuleBasisElement>,
        pure: Vec<usize>,
        dim: usize,
    ) -> Self {
        ExplicitRingModel { ring, rules, basis, pure, dim }
    }

    /// The equivariant cohomology of the quintic del Pezzo threefold under
    /// SL₂: generators u (deg 1), u₁ (deg 2) over ℚ[s₂], relations
    /// u² = 5u₁ + a·s₂ and u₁² = p·u₁s₂ + q·s₂². Extra parameter variables
    /// (weight 0) may be appended so that a, p, q can be symbolic.
    pub fn quintic(params: &[&str], a: impl Fn(&PolyRing) -> Poly, u1_sq: impl Fn(&PolyRing) -> Poly) -> Self {
        let mut vars: Vec<(&str, u32)> = vec![("u", 1), ("u1", 2), ("s2", 2)];
        vars.extend(params.iter().map(|p| (*p, 0)));
        let ring = PolyRing::new(&vars);
        let u = 0;
        let u1 = 1;
        let s2 = 2;
        let r1 = &ring.var("u1").scale(&rat(5)) + &a(&ring).mul_ref(&ring.var("s2"));
        let r2 = u1_sq(&ring);
        let n = ring.nvars();
        let mono = |eu: u16, eu1: u16| {
            let mut e = vec![0u16; n];
            e[u] = eu;
            e[u1] = eu1;
            e
        };
        let basis = vec![
            ModuleBasisElement { exps: mono(0, 0), label: "pt".into(), degree: 0, pairing: rat(1) },
            ModuleBasisElement { exps: mono(1, 0), label: "line".into(), degree: 1, pairing: rat(-1) },
            ModuleBasisElement { exps: mono(0, 1), label: "b".into(), degree: 2, pairing: rat(1) },
            ModuleBasisElement { exps: mono(1, 1), label: "X".into(), degree: 3, pairing: rat(-1) },
        ];
        ExplicitRingModel {
            ring,
            rules: vec![
                RewriteRule { var: u, power: 2, replacement: r1 },
                RewriteRule { var: u1, power: 2, replacement: r2 },
            ],
            basis,
            pure: vec![s2],
            dim: 3,
        }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn pure_vars(&self) -> &[usize] {
        &self.pure
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn module_basis(&self) -> &[ModuleBasisElement] {
        &self.basis
    }

    /// Normal form with rules tried in declaration order.
    pub fn normal_form(&self, x: &Poly) -> Result<Poly, SpaceError> {
        let order: Vec<usize> = (0..self.rules.len()).collect();
        self.normal_form_with_order(x, &order)
    }

    /// Normal form trying rules in the given priority order.
    pub fn normal_form_with_order(&self, x: &Poly, order: &[usize]) -> Result<Poly, SpaceError> {
        let n = x.nvars();
        let mut done = Poly::zero(n);
        let mut todo = x.clone();
        let mut steps = 0usize;
        while let Some((m, c)) = todo.leading().map(|(m, c)| (m.clone(), c.clone())) {
            steps += 1;
            if steps > 1_000_000 {
                return Err(SpaceError::Model("rewriting did not terminate".into()));
            }
            let mut term = Poly::zero(n);
            term.add_term(m.clone(), c.clone());
            todo.sub_assign_ref(&term);
            let rule = order.iter().map(|&k| &self.rules[k]).find(|r| m[r.var] >= r.power);
            match rule {
                None => done.add_term(m, c),
                Some(r) => {
                    let mut rest = m.clone();
                    rest[r.var] -= r.power;
                    todo.add_assign_ref(&r.replacement.mul_monomial(&rest, &c));
                }
            }
        }
        for (m, _) in done.terms() {
            if !self.basis.iter().any(|b| self.is_basis_multiple(m, &b.exps)) {
                return Err(SpaceError::Model(format!("monomial {m:?} is not reducible to the module basis")));
            }
        }
        Ok(done)
    }

    fn is_basis_multiple(&self, m: &[u16], b: &[u16]) -> bool {
        let gens: Vec<usize> = self.rules.iter().map(|r| r.var).collect();
        gens.iter().all(|&g| m[g] == b[g])
    }

    /// Splits a normal form into coefficients (over the pure variables and
    /// parameters) of each module basis element.
    pub fn basis_coefficients(&self, nf: &Poly) -> Vec<Poly> {
        let gens: Vec<usize> = self.rules.iter().map(|r| r.var).collect();
        self.basis
            .iter()
            .map(|b| {
                let mut out = Poly::zero(nf.nvars());
                for (m, c) in nf.terms() {
                    if gens.iter().all(|&g| m[g] == b.exps[g]) {
                        let mut rest = m.clone();
                        for &g in &gens {
                            rest[g] = 0;
                        }
                        out.add_term(rest, c.clone());
                    }
                }
                out
            })
            .collect()
    }

    pub fn homology_basis(&self, k: usize) -> Vec<HomologyClass> {
        self.basis
            .iter()
            .enumerate()
            .filter(|(_, b)| b.degree == k)
            .map(|(i, _)| HomologyClass::Explicit { index: i })
            .collect()
    }

    pub fn label(&self, class: &HomologyClass) -> String {
        match class {
            HomologyClass::Explicit { index } => self.basis[*index].label.clone(),
            other => format!("{other:?}"),
        }
    }

    /// ⟨α*(x), class⟩: pure variables vanish, then the coefficient of the
    /// dual basis element is read off and scaled by the pairing table.
    pub fn pair(&self, x: &Poly, class: &HomologyClass) -> Result<BigRat, SpaceError> {
        let HomologyClass::Explicit { index } = class else {
            return Err(SpaceError::Model("tower class used with an explicit model".into()));
        };
        let nf = self.normal_form(&x.set_zero(&self.pure))?;
        let coeffs = self.basis_coefficients(&nf);
        let c = &coeffs[*index];
        if c.terms().any(|(m, _)| m.iter().any(|&e| e > 0)) {
            return Err(SpaceError::Model("pairing of a class with symbolic coefficients".into()));
        }
        Ok(c.constant_term() * &self.basis[*index].pairing)
    }

    pub fn fundamental_class_pairing(&self, x: &Poly) -> Result<BigRat, SpaceError> {
        let top = self.basis.iter().position(|b| b.degree == self.dim).expect("top class");
        self.pair(x, &HomologyClass::Explicit { index: top })
    }

    /// Specialises parameter variables to numbers.
    pub fn specialise(&self, x: &Poly, values: &[(usize, BigRat)]) -> Poly {
        let n = x.nvars();
        let images: Vec<Poly> = (0..n)
            .map(|i| match values.iter().find(|(v, _)| *v == i) {
                Some((_, val)) => Poly::constant(n, val.clone()),
                None => Poly::var(n, i),
            })
            .collect();
        x.substitute(&images)
    }
}

impl ExplicitRingModel {
    /// Checks that no rewrite leaves a nonzero multiple of the zero polynomial
    /// in an unexpected place: all basis pairings must be nonzero.
    pub fn is_well_formed(&self) -> bool {
        self.basis.iter().all(|b| !b.pairing.is_zero())
    }
}
