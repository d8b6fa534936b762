//! Exact arithmetic: rationals, linear systems, Smith normal form and
//! integer factorisation.

mod factor;
mod linalg;
mod matrix;
pub mod serde_int;
mod snf;

pub use factor::{factorize, Factored, ParseFactoredError};
pub use linalg::{rank, solve_linear, SparseSystem};
pub use matrix::IntMatrix;
pub use snf::{cokernel_order, smith_normal_form, CokernelOrder, InfiniteTag, SnfResult};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Arbitrary-precision rational number, always kept in lowest terms.
pub type BigRat = num_rational::BigRational;

/// Errors raised by the exact-arithmetic layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MathError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("value {0} is not an integer")]
    NotIntegral(String),
}

/// Builds a rational from a machine integer.
pub fn rat(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

/// Builds the rational `num / den`.
pub fn ratio(num: i64, den: i64) -> BigRat {
    BigRat::new(BigInt::from(num), BigInt::from(den))
}

/// Returns the integer value of `q`, or an error if `q` has a denominator.
pub fn to_integer(q: &BigRat) -> Result<BigInt, MathError> {
    if q.denom().is_one() {
        Ok(q.numer().clone())
    } else {
        Err(MathError::NotIntegral(q.to_string()))
    }
}

/// `true` when `q` is zero.
pub fn is_zero(q: &BigRat) -> bool {
    q.is_zero()
}
