//! Exact rational helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::InvalidParameter(format!("`{text}` is not a rational of the form p/q"));
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::InvalidParameter(format!("`{text}` has a zero denominator")));
    }
    Ok(Rational::new(num, den))
}

/// Formats as `p/q`, including a `/1` denominator for integers.
pub fn to_pq(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Lossy conversion for display columns only.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Largest power of two not exceeding `x`.
pub fn floor_pow2(x: u64) -> Result<u64> {
    if x < 1 {
        return Err(Error::InvalidParameter("floor_pow2 needs x >= 1".into()));
    }
    Ok(1u64 << (63 - x.leading_zeros()))
}

/// Iterated base-2 logarithm: the number of times `log2` must be applied
/// before the value drops to at most 1.
///
/// Evaluated exactly against the tower 1, 2, 4, 16, 65536, ...: applying `log2`
/// k times leaves a value above 1 iff `x` exceeds the k-th tower entry.
pub fn log_star(x: &Rational) -> u32 {
    let mut tower = BigInt::one();
    let mut count = 0;
    loop {
        if *x <= Rational::from_integer(tower.clone()) {
            return count;
        }
        count += 1;
        match tower.to_u32() {
            // 2^65536 is larger than any rational we can meet in practice.
            Some(e) if e < 65536 => tower = BigInt::one() << e as usize,
            _ => return count,
        }
    }
}

/// Least common multiple of all denominators.
pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// Converts a nonnegative integral rational into `u64`.
pub fn to_u64_exact(r: &Rational) -> Result<u64> {
    if !r.is_integer() || r.is_negative() {
        return Err(Error::NonIntegralWeights(format!("{} is not a nonnegative integer", to_pq(r))));
    }
    r.numer()
        .to_u64()
        .ok_or_else(|| Error::Overflow(format!("{} does not fit in 64 bits", to_pq(r))))
}

/// Splits `eps = p/q` into machine integers for the hot loops.
pub fn split_u64(r: &Rational) -> Result<(u64, u64)> {
    if r.is_negative() {
        return Err(Error::InvalidParameter(format!("{} is negative", to_pq(r))));
    }
    let p = r.numer().to_u64();
    let q = r.denom().to_u64();
    match (p, q) {
        (Some(p), Some(q)) => Ok((p, q)),
        _ => Err(Error::Overflow(format!(
            "{} has a numerator or denominator beyond 64 bits",
            to_pq(r)
        ))),
    }
}
