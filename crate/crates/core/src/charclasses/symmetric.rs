use crate::weights::Poly;

use super::CharClassError;

/// Rewrites a polynomial that is symmetric in each group of variables as a
/// polynomial in the elementary symmetric functions of the groups.
///
/// The result has one variable per (group, k), in group order, standing for
/// e_k of that group (k = 1..=group size).
pub fn elementary_symmetric_reduce(p: &Poly, groups: &[Vec<usize>]) -> Result<Poly, CharClassError> {
    let n = p.nvars();
    let offsets: Vec<usize> = groups
        .iter()
        .scan(0, |acc, g| {
            let o = *acc;
            *acc += g.len();
            Some(o)
        })
        .collect();
    let m: usize = groups.iter().map(Vec::len).sum();
    if groups.iter().flatten().any(|&v| v >= n) {
        return Err(CharClassError::Derivation("group variable out of range".into()));
    }
    let elem: Vec<Vec<Poly>> = groups
        .iter()
        .map(|g| {
            let vars: Vec<Poly> = g.iter().map(|&v| Poly::var(n, v)).collect();
            super::elementary_of_weights(&vars, n, g.len())
        })
        .collect();
    let mut rest = p.clone();
    let mut out = Poly::zero(m);
    let mut guard = 0usize;
    while let Some((lead, c)) = rest.leading().map(|(a, b)| (a.clone(), b.clone())) {
        guard += 1;
        if guard > 1_000_000 {
            return Err(CharClassError::Derivation("symmetric reduction did not terminate".into()));
        }
        let mut emono = vec![0u16; m];
        let mut expansion = Poly::one(n);
        for (gi, g) in groups.iter().enumerate() {
            let exps: Vec<u16> = g.iter().map(|&v| lead[v]).collect();
            for k in 0..g.len() {
                let next = exps.get(k + 1).copied().unwrap_or(0);
                if exps[k] < next {
                    return Err(CharClassError::Derivation("polynomial is not symmetric".into()));
                }
                let mk = exps[k] - next;
                emono[offsets[gi] + k] = mk;
                if mk > 0 {
                    expansion = expansion.mul_ref(&elem[gi][k + 1].pow(mk as u32));
                }
            }
        }
        if lead.iter().enumerate().any(|(v, &e)| e > 0 && !groups.iter().flatten().any(|&x| x == v)) {
            return Err(CharClassError::Derivation("variable outside the symmetric groups".into()));
        }
        rest.add_scaled(&expansion, &-c.clone());
        out.add_term(emono, c);
    }
    Ok(out)
}

/// Chern classes c₁.. of A⊗B (with optional duals) from c₁..c_a of A and
/// c₁..c_b of B, where the ranks are the lengths of the lists.
pub fn chern_of_tensor(a: &[Poly], dual_a: bool, b: &[Poly], dual_b: bool) -> Result<Vec<Poly>, CharClassError> {
    let (ra, rb) = (a.len(), b.len());
    let n = ra + rb;
    let sign = |d: bool| if d { -1 } else { 1 };
    let mut weights = Vec::new();
    for i in 0..ra {
        for j in 0..rb {
            let x = Poly::var(n, i).scale(&crate::exactmath::rat(sign(dual_a)));
            let y = Poly::var(n, ra + j).scale(&crate::exactmath::rat(sign(dual_b)));
            weights.push(&x + &y);
        }
    }
    let e = super::elementary_of_weights(&weights, n, ra * rb);
    let groups = vec![(0..ra).collect::<Vec<_>>(), (ra..n).collect::<Vec<_>>()];
    let images: Vec<Poly> = a.iter().chain(b.iter()).cloned().collect();
    let target = images
        .first()
        .map(Poly::nvars)
        .ok_or_else(|| CharClassError::Derivation("empty Chern data".into()))?;
    e[1..]
        .iter()
        .map(|ek| {
            let red = elementary_symmetric_reduce(ek, &groups)?;
            if red.is_zero() {
                return Ok(Poly::zero(target));
            }
            Ok(red.substitute(&images))
        })
        .collect()
}
