//! Exact rational numbers.
//!
//! Every invariant is an element of `Rational`; nothing in the crate touches
//! floating point. The serialized form is `"p/q"`, or `"p"` when `q = 1`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{GwError, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// `n!` as an exact rational.
pub fn factorial(n: u64) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Rational::from_integer(acc)
}

pub fn binomial(n: i64, k: i64) -> Rational {
    if k < 0 || n < 0 || k > n {
        return zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p
                .trim()
                .parse()
                .map_err(|_| GwError::Parse(s.to_string()))?;
            let q: BigInt = q
                .trim()
                .parse()
                .map_err(|_| GwError::Parse(s.to_string()))?;
            if q.is_zero() {
                return Err(GwError::Parse(format!("zero denominator in {s}")));
            }
            Rational::new(p, q)
        }
        None => Rational::from_integer(s.parse().map_err(|_| GwError::Parse(s.to_string()))?),
    };
    Ok(parsed)
}

/// `true` when the value is an integer.
pub fn is_integral(q: &Rational) -> bool {
    q.denom().is_one()
}

pub fn sign_pow(k: u64) -> Rational {
    if k.is_multiple_of(2) {
        one()
    } else {
        -one()
    }
}

pub fn is_negative(q: &Rational) -> bool {
    q.is_negative()
}
