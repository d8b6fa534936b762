use num_bigint::BigUint;
use num_traits::Zero;

use super::BoundError;

/// Bound for the projective automorphism group of a smooth degree-d
/// hypersurface in ℙⁿ:
/// (d−1)ⁿ · Π_{i=2}^{n+1} ((d−1)^{n+1} + (−1)^{i+1}(d−1)^{n+1−i}).
pub fn hypersurface_bound(n: u32, d: u32) -> Result<BigUint, BoundError> {
    if n < 1 || d < 2 {
        return Err(BoundError::Domain(format!("hypersurface bound needs n ≥ 1 and d ≥ 2, got n = {n}, d = {d}")));
    }
    let q = BigUint::from(d - 1);
    let top = q.pow(n + 1);
    let mut out = q.pow(n);
    for i in 2..=n + 1 {
        let low = q.pow(n + 1 - i);
        let factor = if i % 2 == 1 { &top + &low } else { &top - &low };
        out *= factor;
    }
    Ok(out)
}

/// Bound for automorphisms of a smooth quadric Q_k preserving a degree-d
/// hypersurface section, with n = ⌊k/2⌋ + 1:
/// 2^{⌊3n/2⌋} · Σ_{i=0}^{k}(i+1)(d−1)^i · Π_{i=1}^{n} Σ_{j=k−2(i−1)}^{k+1}(d−1)^j.
///
/// The inner sums are kept in summation form so that d = 2 needs no special
/// case.
pub fn quadric_hypersurface_bound(k: u32, d: u32) -> Result<BigUint, BoundError> {
    if k < 2 || d < 2 {
        return Err(BoundError::Domain(format!("quadric bound needs k ≥ 2 and d ≥ 2, got k = {k}, d = {d}")));
    }
    let n = k / 2 + 1;
    let q = BigUint::from(d - 1);
    let mut out = BigUint::from(2u32).pow(3 * n / 2);
    let first: BigUint = (0..=k).map(|i| BigUint::from(i + 1) * q.pow(i)).sum();
    out *= first;
    for i in 1..=n {
        let start = k as i64 - 2 * (i as i64 - 1);
        let s: BigUint = (start..=k as i64 + 1).filter(|&j| j >= 0).map(|j| q.pow(j as u32)).sum();
        if s.is_zero() {
            return Err(BoundError::Domain("vanishing factor in quadric bound".into()));
        }
        out *= s;
    }
    Ok(out)
}
