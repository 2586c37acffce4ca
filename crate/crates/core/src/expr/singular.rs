//! Syntactic scan for parameter values that make an expression singular.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use super::{Poly, QExpr};
use crate::rational::{fmt_pq, parse_rational, QRational};

/// `param != excluded`
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint {
    pub param: String,
    pub excluded: QRational,
}

impl Constraint {
    pub fn new(param: &str, excluded: QRational) -> Self {
        Constraint { param: param.to_string(), excluded }
    }

    pub fn admits(&self, value: &QRational) -> bool {
        *value != self.excluded
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.excluded.is_integer() {
            write!(f, "{} != {}", self.param, self.excluded.numer())
        } else {
            write!(f, "{} != {}", self.param, fmt_pq(&self.excluded))
        }
    }
}

impl FromStr for Constraint {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (p, v) = s.split_once("!=").ok_or_else(|| format!("expected `NAME != VALUE`, got `{s}`"))?;
        Ok(Constraint::new(p.trim(), parse_rational(v)?))
    }
}

/// A monomial in one parameter, `c * p^m * q^e`, as far as it can be read
/// off syntactically.
struct ParamMono {
    coeff: QRational,
    param: Option<String>,
    power: i64,
    qexp: Poly,
}

fn read_mono(e: &QExpr) -> Option<ParamMono> {
    let unit = || ParamMono { coeff: QRational::one(), param: None, power: 0, qexp: Poly::default() };
    match e {
        QExpr::Const(c) => Some(ParamMono { coeff: c.clone(), ..unit() }),
        QExpr::Param(p) => Some(ParamMono { param: Some(p.clone()), power: 1, ..unit() }),
        QExpr::QPow(x) => Some(ParamMono { qexp: *x, ..unit() }),
        QExpr::Neg(x) => read_mono(x).map(|m| ParamMono { coeff: -m.coeff, ..m }),
        QExpr::Mul(v) => v.iter().try_fold(unit(), |acc, x| combine(acc, read_mono(x)?, 1)),
        QExpr::Div(a, b) => combine(read_mono(a)?, read_mono(b)?, -1),
        _ => None,
    }
}

fn combine(a: ParamMono, b: ParamMono, sign: i64) -> Option<ParamMono> {
    let param = match (&a.param, &b.param) {
        (Some(x), Some(y)) if x != y => return None,
        (x, y) => x.clone().or_else(|| y.clone()),
    };
    if b.coeff.is_zero() && sign < 0 {
        return None;
    }
    Some(ParamMono {
        coeff: if sign > 0 { a.coeff * b.coeff } else { a.coeff / b.coeff },
        param,
        power: a.power + sign * b.power,
        qexp: if sign > 0 { a.qexp + b.qexp } else { a.qexp - b.qexp },
    })
}

/// Value of the parameter making `1 - m` vanish at q-exponent zero.
fn root_of_one_minus(m: &ParamMono, out: &mut BTreeSet<Constraint>) {
    let Some(p) = &m.param else { return };
    if m.coeff.is_zero() || !m.qexp.is_constant() || !m.qexp.constant_term().is_zero() {
        return;
    }
    match m.power {
        1 => {
            out.insert(Constraint::new(p, m.coeff.recip()));
        }
        -1 => {
            out.insert(Constraint::new(p, m.coeff.clone()));
        }
        _ => {}
    }
}

fn scan(e: &QExpr, denominator: bool, out: &mut BTreeSet<Constraint>) {
    match e {
        QExpr::Param(p) if denominator => {
            out.insert(Constraint::new(p, QRational::zero()));
        }
        QExpr::Pow { base, exp } => {
            let negative = exp.coeffs().iter().any(|c| *c < 0.into());
            if negative || denominator {
                if let QExpr::Param(p) = &**base {
                    out.insert(Constraint::new(p, QRational::zero()));
                }
            }
            scan(base, denominator, out);
        }
        QExpr::Poch { arg, .. } => {
            if denominator {
                if let Some(m) = read_mono(arg) {
                    root_of_one_minus(&m, out);
                    if let Some(p) = &m.param {
                        if m.power < 0 {
                            out.insert(Constraint::new(p, QRational::zero()));
                        }
                    }
                }
            }
            scan(arg, false, out);
        }
        QExpr::QuadRatio { k, .. } => {
            if let QExpr::Param(p) = &**k {
                out.insert(Constraint::new(p, QRational::zero()));
            }
            scan(k, false, out);
        }
        QExpr::SqrtPairRatio { x, .. } => {
            if let Some(m) = read_mono(x) {
                root_of_one_minus(&m, out);
            }
            scan(x, false, out);
        }
        QExpr::Add(v) => {
            if denominator {
                if let [QExpr::Const(c0), rest] = v.as_slice() {
                    if let Some(m) = read_mono(rest) {
                        if !c0.is_zero() {
                            let scaled = ParamMono { coeff: -m.coeff / c0, ..m };
                            root_of_one_minus(&scaled, out);
                        }
                    }
                }
            }
            v.iter().for_each(|x| scan(x, false, out));
        }
        QExpr::Mul(v) => v.iter().for_each(|x| scan(x, denominator, out)),
        QExpr::Div(a, b) => {
            scan(a, denominator, out);
            scan(b, !denominator, out);
        }
        QExpr::Neg(x) => scan(x, denominator, out),
        QExpr::CaseSplit { zero, nonzero, .. } => {
            scan(zero, denominator, out);
            scan(nonzero, denominator, out);
        }
        QExpr::Divides { body, .. } | QExpr::Sum { body, .. } | QExpr::DoubleSum { body } => {
            scan(body, denominator, out)
        }
        QExpr::PochInf { arg, .. } => scan(arg, false, out),
        QExpr::Const(_) | QExpr::Param(_) | QExpr::QPow(_) | QExpr::SignPow(_) => {}
    }
}

/// Parameter values at which some denominator or prefactor of `e` vanishes,
/// read off syntactically. Not exhaustive: values that only vanish at a
/// nonzero q-exponent are left to the evaluator.
pub fn singular_set(e: &QExpr) -> Vec<Constraint> {
    let mut out = BTreeSet::new();
    scan(e, false, &mut out);
    out.into_iter().collect()
}
