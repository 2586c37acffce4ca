//! Exact rational helpers shared by the engine.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

/// Exact coefficient type.
pub type QRational = BigRational;

/// Rational exponent of `q`. Exponents stay small, so machine words suffice.
pub type Exp = Rational64;

pub fn rat(n: i64, d: i64) -> QRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> QRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn exp(n: i64, d: i64) -> Exp {
    Rational64::new(n, d)
}

/// Parses `p`, `-p`, or `p/q`.
pub fn parse_rational(s: &str) -> Result<QRational, String> {
    let s = s.trim();
    let bad = || format!("not a rational number: `{s}`");
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(BigRational::new(n, d))
}

pub fn parse_exp(s: &str) -> Result<Exp, String> {
    let r = parse_rational(s)?;
    to_exp(&r).ok_or_else(|| format!("exponent `{s}` out of range"))
}

pub fn to_exp(r: &QRational) -> Option<Exp> {
    let n = i64::try_from(r.numer()).ok()?;
    let d = i64::try_from(r.denom()).ok()?;
    Some(Rational64::new(n, d))
}

pub fn from_exp(e: Exp) -> QRational {
    rat(*e.numer(), *e.denom())
}

/// Always `p/q`, including integers (`3/1`).
pub fn fmt_pq(r: &QRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn fmt_exp_pq(e: Exp) -> String {
    format!("{}/{}", e.numer(), e.denom())
}

/// `e * scale` as an integer, if it is one.
pub fn exp_to_t(e: Exp, scale: u32) -> Option<i64> {
    let t = e * Rational64::from_integer(scale as i64);
    t.is_integer().then(|| t.to_integer())
}

pub fn t_to_exp(t: i64, scale: u32) -> Exp {
    Rational64::new(t, scale as i64)
}

pub fn is_unit(r: &QRational) -> bool {
    r.is_one() || (-r).is_one()
}

pub fn abs_num(r: &QRational) -> BigInt {
    r.numer().abs()
}
