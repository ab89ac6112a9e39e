//! Exact rational arithmetic and the integer combinatorics the closed forms need.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Arbitrary-precision rational used for every exact probability and moment.
pub type ExactRational = BigRational;

pub fn ratio(num: u64, den: u64) -> ExactRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(value: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(value))
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by (i + 1)
        acc = acc * (n - i) / (i + 1);
    }
    BigInt::from(acc)
}

/// H_m = 1 + 1/2 + ... + 1/m.
pub fn harmonic(m: u64) -> ExactRational {
    (1..=m).fold(ExactRational::zero(), |acc, i| acc + ratio(1, i))
}

/// Exact value of an `f64` as a dyadic rational.
pub fn from_f64(value: f64) -> Option<ExactRational> {
    BigRational::from_float(value)
}

pub fn to_f64(value: &ExactRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// `"num/den"` in lowest terms, or just `"num"` for integers.
pub fn format(value: &ExactRational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn parse(text: &str) -> Option<ExactRational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((num, den)) => {
            let den: BigInt = den.trim().parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(BigRational::new(num.trim().parse().ok()?, den))
        }
        None => Some(BigRational::from_integer(text.parse().ok()?)),
    }
}
