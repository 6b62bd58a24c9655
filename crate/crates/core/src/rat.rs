//! Rational scalars.
//!
//! `Rat` is `num_rational::BigRational`: numerator and denominator are kept
//! coprime with a positive denominator, and zero is `0/1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Gcd of the absolute values of a slice of integers (zero for an all-zero slice).
pub fn content(values: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for v in values {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    g
}

/// `base^exp` for a possibly negative exponent; `None` when inverting zero.
pub fn pow_signed(base: &Rat, exp: i64) -> Option<Rat> {
    if exp >= 0 {
        return Some(num_traits::pow(base.clone(), exp as usize));
    }
    if base.is_zero() {
        return None;
    }
    Some(num_traits::pow(base.recip(), exp.unsigned_abs() as usize))
}

/// Canonical text of a rational: `3`, `-3/2`.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Text of `|r|`, used when the sign is printed separately.
pub fn format_abs(r: &Rat) -> String {
    format_rat(&r.abs())
}

/// Serialize a rational as its canonical text.
pub fn ser_rat<S: serde::Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rat(r))
}

/// Serialize a list of rationals as canonical strings.
pub fn ser_rats<S: serde::Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rat))
}
