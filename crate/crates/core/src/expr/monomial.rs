use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::rational::{parse_exp, parse_rational, Exp, QRational};

/// `coeff * q^exp`. Parameter values and Pochhammer arguments are monomials.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub coeff: QRational,
    pub exp: Exp,
}

impl Monomial {
    pub fn new(coeff: QRational, exp: Exp) -> Self {
        Monomial { coeff, exp }
    }

    pub fn constant(coeff: QRational) -> Self {
        Monomial { coeff, exp: Exp::zero() }
    }

    pub fn one() -> Self {
        Self::constant(QRational::one())
    }

    pub fn q_pow(exp: Exp) -> Self {
        Monomial { coeff: QRational::one(), exp }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial { coeff: &self.coeff * &o.coeff, exp: self.exp + o.exp }
    }

    /// `None` when `o` is zero.
    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        (!o.is_zero()).then(|| Monomial { coeff: &self.coeff / &o.coeff, exp: self.exp - o.exp })
    }

    /// Integer power; `None` for a negative power of zero.
    pub fn pow(&self, k: i64) -> Option<Monomial> {
        if k < 0 && self.is_zero() {
            return None;
        }
        let c = self.coeff.pow(k as i32);
        Some(Monomial { coeff: c, exp: self.exp * Exp::from_integer(k) })
    }

    pub fn neg(&self) -> Monomial {
        Monomial { coeff: -self.coeff.clone(), exp: self.exp }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp.is_zero() || self.coeff.is_zero() {
            return write!(f, "{}", self.coeff);
        }
        if self.coeff.is_one() {
        } else if (-&self.coeff).is_one() {
            write!(f, "-")?;
        } else {
            write!(f, "{}*", self.coeff)?;
        }
        if self.exp.is_one() {
            write!(f, "q")
        } else if self.exp.is_integer() && self.exp.is_positive() {
            write!(f, "q^{}", self.exp)
        } else {
            write!(f, "q^({})", self.exp)
        }
    }
}

/// Accepts `3`, `-1/2`, `q`, `-q`, `q^2`, `2*q^(1/2)`, `-1/3*q^(-1)`.
impl FromStr for Monomial {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let Some(qpos) = s.find('q') else {
            return Ok(Monomial::constant(parse_rational(s)?));
        };
        let (head, tail) = (s[..qpos].trim(), s[qpos + 1..].trim());
        let coeff = match head {
            "" => QRational::one(),
            "-" => -QRational::one(),
            h => parse_rational(h.strip_suffix('*').ok_or_else(|| format!("bad monomial `{s}`"))?)?,
        };
        let exp = if tail.is_empty() {
            Exp::one()
        } else {
            let e = tail.strip_prefix('^').ok_or_else(|| format!("bad monomial `{s}`"))?.trim();
            let e = e.strip_prefix('(').and_then(|e| e.strip_suffix(')')).unwrap_or(e);
            parse_exp(e)?
        };
        Ok(Monomial { coeff, exp })
    }
}

/// Value bound to a parameter.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParamValue {
    Value(Monomial),
    /// The analytic limit of a parameter tending to infinity (used for `y`, `z`).
    Infinity,
}

impl ParamValue {
    pub fn rational(r: QRational) -> Self {
        ParamValue::Value(Monomial::constant(r))
    }

    pub fn monomial(&self) -> Option<&Monomial> {
        match self {
            ParamValue::Value(m) => Some(m),
            ParamValue::Infinity => None,
        }
    }

    /// JSON-facing text: `p/q` for rationals, monomial syntax otherwise.
    pub fn to_report_string(&self) -> String {
        match self {
            ParamValue::Infinity => "inf".into(),
            ParamValue::Value(m) if m.exp.is_zero() => crate::rational::fmt_pq(&m.coeff),
            ParamValue::Value(m) => m.to_string(),
        }
    }
}

impl fmt::Debug for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Value(m) => write!(f, "{m}"),
            ParamValue::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for ParamValue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "inf" | "infinity" | "Infinity" => Ok(ParamValue::Infinity),
            t => Ok(ParamValue::Value(t.parse()?)),
        }
    }
}

impl From<QRational> for ParamValue {
    fn from(r: QRational) -> Self {
        ParamValue::rational(r)
    }
}

impl From<Monomial> for ParamValue {
    fn from(m: Monomial) -> Self {
        ParamValue::Value(m)
    }
}

pub type ParamBinding = BTreeMap<String, ParamValue>;

/// Parses `k=1/3,a=q`.
pub fn parse_binding(s: &str) -> Result<ParamBinding, String> {
    let mut b = ParamBinding::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) =
            part.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got `{part}`"))?;
        b.insert(name.trim().to_string(), value.parse()?);
    }
    Ok(b)
}
