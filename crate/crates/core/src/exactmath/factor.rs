use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// A positive integer stored by its prime factorisation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Factored {
    exps: BTreeMap<u64, u32>,
}

impl Factored {
    pub fn one() -> Self {
        Factored::default()
    }

    pub fn from_pairs(pairs: &[(u64, u32)]) -> Self {
        let mut f = Factored::one();
        for &(p, e) in pairs {
            if e > 0 {
                *f.exps.entry(p).or_insert(0) += e;
            }
        }
        f
    }

    pub fn from_u64(n: u64) -> Self {
        factorize(&BigUint::from(n))
    }

    /// Sorted (prime, exponent) pairs.
    pub fn pairs(&self) -> Vec<(u64, u32)> {
        self.exps.iter().map(|(&p, &e)| (p, e)).collect()
    }

    pub fn exponent(&self, p: u64) -> u32 {
        self.exps.get(&p).copied().unwrap_or(0)
    }

    pub fn value(&self) -> BigUint {
        self.exps.iter().fold(BigUint::one(), |acc, (&p, &e)| acc * BigUint::from(p).pow(e))
    }

    pub fn mul(&self, other: &Factored) -> Factored {
        let mut out = self.clone();
        for (&p, &e) in &other.exps {
            *out.exps.entry(p).or_insert(0) += e;
        }
        out
    }

    /// Exact quotient, or `None` when `other` does not divide `self`.
    pub fn checked_div(&self, other: &Factored) -> Option<Factored> {
        let mut out = self.clone();
        for (&p, &e) in &other.exps {
            let cur = out.exps.get(&p).copied().unwrap_or(0);
            if cur < e {
                return None;
            }
            if cur == e {
                out.exps.remove(&p);
            } else {
                out.exps.insert(p, cur - e);
            }
        }
        Some(out)
    }

    pub fn divides(&self, other: &Factored) -> bool {
        other.checked_div(self).is_some()
    }
}

impl fmt::Display for Factored {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exps
            .iter()
            .map(|(&p, &e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// Parse error for factored integers written like `2^12·3^4·7`.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse factored integer {0:?}")]
pub struct ParseFactoredError(pub String);

impl FromStr for Factored {
    type Err = ParseFactoredError;

    /// Accepts `·`, `*` or `.` as separators; factors need not be prime.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseFactoredError(s.to_string());
        let s = s.trim();
        if s == "1" {
            return Ok(Factored::one());
        }
        let mut out = Factored::one();
        for part in s.split(['·', '*', '.']) {
            let part = part.trim();
            let (base, exp) = match part.split_once('^') {
                Some((b, e)) => (b.trim(), e.trim().parse::<u32>().map_err(|_| err())?),
                None => (part, 1),
            };
            let b: u64 = base.parse().map_err(|_| err())?;
            if b == 0 {
                return Err(err());
            }
            let fb = Factored::from_u64(b);
            for _ in 0..exp {
                out = out.mul(&fb);
            }
        }
        Ok(out)
    }
}

impl Serialize for Factored {
    /// Serialised as a list of `[prime, exponent]` pairs.
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.pairs().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Factored {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let pairs = Vec::<(u64, u32)>::deserialize(deserializer)?;
        Ok(Factored::from_pairs(&pairs))
    }
}

/// Prime factorisation by trial division.
///
/// # Panics
/// Panics on zero, and if a prime factor exceeds `u64` (never the case for
/// the bounds handled here).
pub fn factorize(n: &BigUint) -> Factored {
    assert!(!n.is_zero(), "factorize(0) is undefined");
    let mut rest = n.clone();
    let mut exps = BTreeMap::new();
    let mut p: u64 = 2;
    loop {
        let bp = BigUint::from(p);
        if &bp * &bp > rest {
            break;
        }
        while rest.is_multiple_of(&bp) {
            rest /= &bp;
            *exps.entry(p).or_insert(0) += 1;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        let last = rest.to_u64().expect("prime factor fits in u64");
        *exps.entry(last).or_insert(0) += 1;
    }
    Factored { exps }
}
