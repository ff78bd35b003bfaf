//! Arbitrary-precision integers, exact rationals and the combinatorial
//! primitives shared by the rest of the crate.
//!
//! `BigInt` and `BigRat` are the `num` types; rationals are normalised on
//! construction, so two equal probabilities compare equal structurally.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use num_bigint::BigInt;
pub type BigRat = num_rational::BigRational;

/// `n!`.
pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k).into()
}

/// `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    // Running product stays integral: after step i it equals C(n-k+i, i).
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc = acc * (n - k + i) / i;
    }
    acc.into()
}

/// Signed-argument binomial used by closed forms whose upper index can go
/// negative at the edges of their range; `C(n, k) = 0` for `n < 0`.
pub(crate) fn binomial_i(n: i64, k: i64) -> BigInt {
    if n < 0 {
        BigInt::zero()
    } else {
        binomial(n as u64, k)
    }
}

/// Multinomial coefficient `(Σ parts)! / Π parts!`.
pub fn multinomial(parts: &[u64]) -> BigInt {
    let mut total = 0u64;
    let mut acc = BigInt::one();
    for &p in parts {
        total += p;
        acc *= binomial(total, p as i64);
    }
    acc
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRat {
    BigRat::new(num.into(), den.into())
}

pub fn rat_int(n: impl Into<BigInt>) -> BigRat {
    BigRat::from_integer(n.into())
}

/// Numerator and denominator as decimal strings (denominator positive).
pub fn rat_parts(r: &BigRat) -> (String, String) {
    (r.numer().to_string(), r.denom().to_string())
}

/// `"num/den"`, or just `"num"` for integers.
pub fn format_rat(r: &BigRat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_rat(text: &str) -> Result<BigRat> {
    let bad = || Error::Parse(text.to_string());
    let (num, den) = match text.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRat::new(num, den))
}

/// Nearest `f64` to the rational.
pub fn rat_to_f64(r: &BigRat) -> f64 {
    let magnitude = div_to_f64(&r.numer().magnitude().clone(), &r.denom().magnitude().clone());
    if r.is_negative() {
        -magnitude
    } else {
        magnitude
    }
}

/// Correctly rounded (round-half-even) `n / d` for `d > 0`, including the
/// subnormal range and overflow to infinity.
fn div_to_f64(n: &BigUint, d: &BigUint) -> f64 {
    if n.is_zero() {
        return 0.0;
    }
    // n/d lies in [2^(e-1), 2^(e+1)); pick k so that n·2^k/d has 53 bits.
    let e = n.bits() as i64 - d.bits() as i64;
    let scaled = |k: i64| -> (BigUint, BigUint) {
        let (num, den) = if k >= 0 { (n << k as u64, d.clone()) } else { (n.clone(), d << (-k) as u64) };
        num.div_rem(&den)
    };
    let mut k = 53 - e;
    let (mut q, mut rem) = scaled(k);
    if q.bits() > 53 {
        k -= 1;
        (q, rem) = scaled(k);
    }
    // Leading bit sits at 2^(52-k); outside the normal range precision shrinks.
    if 52 - k > 1023 {
        return f64::INFINITY;
    }
    if k > 1074 {
        k = 1074;
        (q, rem) = scaled(k);
    }
    let den = if k >= 0 { d.clone() } else { d << (-k) as u64 };
    let twice = rem << 1u32;
    let mut mant = q.to_u64().expect("at most 53 bits");
    if twice > den || (twice == den && mant & 1 == 1) {
        mant += 1;
    }
    if 52 - k == 1023 && mant == 1 << 53 {
        return f64::INFINITY;
    }
    // mant < 2^53 (or exactly 2^53) converts exactly; scale in exact steps.
    let mut value = mant as f64;
    let mut shift = -k;
    while shift != 0 {
        let step = shift.clamp(-1022, 1023);
        value *= f64::from_bits(((1023 + step) as u64) << 52);
        shift -= step;
    }
    value
}

/// Serde helpers writing big numbers as strings.
pub mod as_string {
    use super::{format_rat, BigInt, BigRat};
    use serde::Serializer;

    pub fn int<S: Serializer>(v: &BigInt, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&v.to_string())
    }

    pub fn rat<S: Serializer>(v: &BigRat, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&format_rat(v))
    }
}
