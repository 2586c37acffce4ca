//! WP versions of the standard, Euler and Jackson-Slater multiparameter
//! Bailey pairs.
//!
//! The families are indexed by positive integers `(d, e, h)`. With `a = A^e`
//! and base `q^e` the pair is written in `A` and `q`, so no fractional powers
//! of the parameters appear; `A` is the sampled parameter `a`.

use super::{PairError, PairSpec};
use crate::expr::{divides, p, poch, q, sign, sqrt_pair, sum_to, Poly, QExpr, Var};
use crate::rational::exp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Standard,
    Euler,
    JacksonSlater,
}

impl Family {
    pub fn id(self) -> &'static str {
        match self {
            Family::Standard => "SMBP",
            Family::Euler => "EMBP",
            Family::JacksonSlater => "JSMBP",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiparamSpec {
    pub family: Family,
    pub d: u32,
    pub e: u32,
    pub h: u32,
}

/// The `(d, e, h)` triples that are built and tested.
pub const SUPPORTED_TRIPLES: [(u32, u32, u32); 8] =
    [(1, 1, 1), (1, 1, 2), (1, 2, 1), (1, 2, 2), (2, 1, 1), (2, 1, 2), (2, 1, 3), (3, 1, 1)];

fn alpha(s: &MultiparamSpec) -> QExpr {
    let (d, h) = (s.d as i64, s.h as i64);
    let n = Poly::n();
    let r = n * exp(1, d);
    let a = p("a");
    // (-1)^r A^((h-d) r) q^((h-d) d r^2 + d r (r-1)/2) (1 - A q^(2dr)) (A; q^d)_r / ((1 - A)(q^d; q^d)_r)
    let standard = sign(r)
        * a.clone().pow(r * (h - d))
        * q(r * r * ((h - d) * d) + (r * r - r) * exp(d, 2))
        * sqrt_pair(a.clone(), n)
        * poch(a.clone(), d, r)
        / poch(q(d), d, r);
    let body = match s.family {
        Family::Standard => standard,
        Family::Euler => {
            a.clone().pow(-r) * q(-(r * r - r) * exp(d, 2)) * poch(-a, d, r) / poch(-q(d), d, r) * standard
        }
        Family::JacksonSlater => {
            sign(r) * q(-(r * r) * exp(d, 2)) * poch(q(exp(d, 2)), d, r) / poch(a * q(exp(d, 2)), d, r) * standard
        }
    };
    divides(d, n, body)
}

fn beta(s: &MultiparamSpec) -> QExpr {
    let (d, e, h) = (s.d as i64, s.e as i64, s.h as i64);
    let (n, r) = (Poly::n(), Poly::j());
    let (a, k) = (p("a"), p("k"));
    let ae = a.clone().pow(e);
    let prefactor = poch(k.clone(), e, n) * poch(k.clone() / ae.clone(), e, n)
        / (poch(q(e), e, n) * poch(ae.clone() * q(e), e, n));
    let dr = r * d;
    let common = sqrt_pair(a.clone(), dr) * poch(q(-n * e), e, dr) * poch(k.clone() * q(n * e), e, dr)
        / (poch(ae.clone() * q((n + 1) * e), e, dr) * poch(ae * q((-n + 1) * e) / k.clone(), e, dr));
    let kpow = k.pow(-dr);
    let term = match s.family {
        Family::Standard => {
            poch(a.clone(), d, r)
                * sign(r)
                * a.pow(r * (h - d + e * d))
                * kpow
                * q((r * r * ((2 * h - 2 * d + 1) * d) + r * ((2 * e - 1) * d)) * exp(1, 2))
                / poch(q(d), d, r)
        }
        Family::Euler => {
            poch(a.clone() * a.clone(), 2 * d, r)
                * sign(r)
                * a.pow(r * (h - d - 1 + e * d))
                * kpow
                * q(r * r * ((h - d) * d) + r * (e * d))
                / poch(q(2 * d), 2 * d, r)
        }
        Family::JacksonSlater => {
            poch(a.clone(), d, r) * poch(q(exp(d, 2)), d, r) * a.clone().pow(r * (h - d + e * d))
                * kpow
                * q(r * r * ((h - d) * d) + r * exp((2 * e - 1) * d, 2))
                / (poch(q(d), d, r) * poch(a * q(exp(d, 2)), d, r))
        }
    };
    prefactor * sum_to(Var::J, n * exp(1, d), common * term)
}

/// The WP pair of the given family at `(d, e, h)`.
pub fn multiparam_pair(s: MultiparamSpec) -> Result<PairSpec, PairError> {
    if !SUPPORTED_TRIPLES.contains(&(s.d, s.e, s.h)) {
        return Err(PairError::BadParams {
            name: s.family.id().into(),
            why: format!("({},{},{}) is not among the supported triples", s.d, s.e, s.h),
        });
    }
    let scale = if s.family == Family::JacksonSlater && s.d % 2 == 1 { 2 } else { 1 };
    let a = if s.e == 1 { p("a") } else { p("a").pow(s.e as i64) };
    let name = format!("{}({},{},{})", s.family.id(), s.d, s.e, s.h);
    let what = match s.family {
        Family::Standard => "standard",
        Family::Euler => "Euler",
        Family::JacksonSlater => "Jackson-Slater",
    };
    Ok(PairSpec::wp(&name, alpha(&s), beta(&s), a)
        .with_base(s.e as i64)
        .with_scale(scale)
        .describe(&format!(
            "WP lift of the {what} multiparameter Bailey pair; relative to a^{}, base q^{}",
            s.e, s.e
        ))
        .require(crate::expr::Constraint::new("a", crate::rational::int(1)))
        .require(crate::expr::Constraint::new("k", crate::rational::int(0))))
}

