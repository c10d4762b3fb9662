//! Exact rational scalars and the small number-theoretic helpers the rest
//! of the crate leans on.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always held in lowest terms with a positive
/// denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// Renders as `"num/den"`, or `"num"` when the denominator is one.
pub fn fmt_scalar(q: &Scalar) -> String {
    q.to_string()
}

/// Parses `"n"`, `"-n"` or `"n/d"` (whitespace around the slash allowed).
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let bad = || Error::Parse {
        field: "rational".into(),
        message: format!("malformed rational literal {s:?}"),
    };
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Scalar::new(n, d))
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Multiplicity of the prime `p` in the nonzero integer `n`.
pub fn int_valuation(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `p`-adic valuation of a rational; `None` stands for `+∞` (the zero case).
pub fn padic_valuation(q: &Scalar, p: u64) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    Some(int_valuation(q.numer(), p) - int_valuation(q.denom(), p))
}

pub fn pow(q: &Scalar, e: u32) -> Scalar {
    num_traits::pow(q.clone(), e as usize)
}

/// Floor of `n^(1/k)` for a nonnegative integer.
pub fn floor_root(n: &BigInt, k: u32) -> BigInt {
    debug_assert!(!n.is_negative());
    n.nth_root(k)
}

/// A rational lower bound for `base^(num/den)` with `base ≥ 1`, accurate to
/// about `2^-scale_bits` relative error.
pub fn rational_power_lower(base: u64, num: &BigInt, den: &BigInt, scale_bits: u32) -> Result<Scalar> {
    let num = num
        .to_u32()
        .ok_or_else(|| Error::InvalidTail("exponent numerator too large".into()))?;
    let den = den
        .to_u32()
        .ok_or_else(|| Error::InvalidTail("exponent denominator too large".into()))?;
    let whole = num / den;
    let frac = num % den;
    let b = BigInt::from(base);
    let int_part = num_traits::pow(b.clone(), whole as usize);
    if frac == 0 {
        return Ok(Scalar::from_integer(int_part));
    }
    let scale = BigInt::one() << scale_bits;
    let radicand = num_traits::pow(b, frac as usize) * num_traits::pow(scale.clone(), den as usize);
    let root = floor_root(&radicand, den);
    Ok(Scalar::new(int_part * root, scale))
}

/// Rational bounds `(lower, upper)` for `base^(num/den)` with `base ≥ 1`.
pub fn rational_power_bounds(base: u64, exponent: &Scalar, scale_bits: u32) -> Result<(Scalar, Scalar)> {
    let lower = rational_power_lower(base, exponent.numer(), exponent.denom(), scale_bits)?;
    if lower.is_integer() && exponent.is_integer() {
        return Ok((lower.clone(), lower));
    }
    let whole = (exponent.numer() / exponent.denom())
        .to_u32()
        .ok_or_else(|| Error::InvalidTail("exponent too large".into()))?;
    let step = Scalar::new(num_traits::pow(BigInt::from(base), whole as usize), BigInt::one() << scale_bits);
    let upper = &lower + step;
    Ok((lower, upper))
}

/// `c mod p^k` for a `p`-integral rational `c`, as a nonnegative integer.
pub fn reduce_mod_prime_power(c: &Scalar, p: u64, k: u32) -> Option<BigInt> {
    let modulus = num_traits::pow(BigInt::from(p), k as usize);
    let den = c.denom();
    if int_valuation(den, p) > 0 {
        return None;
    }
    let eg = den.extended_gcd(&modulus);
    debug_assert!(eg.gcd.is_one());
    Some((c.numer() * eg.x).mod_floor(&modulus))
}

pub fn scalar_max<'a>(a: &'a Scalar, b: &'a Scalar) -> &'a Scalar {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn to_f64(q: &Scalar) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}

pub fn is_integer(q: &Scalar) -> bool {
    q.denom().is_one()
}

pub fn sign(q: &Scalar) -> Sign {
    q.numer().sign()
}

/// Serde adapter writing scalars as `"num/den"` strings.
pub mod as_string {
    use super::{fmt_scalar, parse_scalar, Scalar};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_scalar(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        let text = String::deserialize(d)?;
        parse_scalar(&text).map_err(serde::de::Error::custom)
    }
}

/// As [`as_string`] for optional scalars.
pub mod as_opt_string {
    use super::{fmt_scalar, Scalar};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(q: &Option<Scalar>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_str(&fmt_scalar(q)),
            None => s.serialize_none(),
        }
    }
}
