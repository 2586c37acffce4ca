//! Symbolic summands and products over the q-series engine.
//!
//! A [`QExpr`] is a product/quotient/sum tree whose leaves are constants,
//! parameters, powers of `q`, signs and q-Pochhammer symbols. Exponents and
//! Pochhammer counts are polynomials in the summation variables `n`, `j`.

mod eval;
mod monomial;
mod poly;
mod print;
mod shape;
mod simplify;
mod singular;
mod subst;

use std::ops;

pub use eval::{eval_to_order, EvalContext, EvalError, SumPolicy, TermsUsed};
pub use monomial::{parse_binding, Monomial, ParamBinding, ParamValue};
pub use poly::{Poly, Var};
pub use shape::{degree_bound, Shape, ShapeError};
pub use simplify::simplify;
pub use singular::{singular_set, Constraint};
pub use subst::{Subst, SubstError};

use crate::rational::{int, Exp, QRational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum QExpr {
    Const(QRational),
    Param(String),
    /// `q^p`
    QPow(Poly),
    /// `(-1)^p`, `p` integral when evaluated.
    SignPow(Poly),
    /// `base^p` for a monomial-valued base and integral `p`.
    Pow { base: Box<QExpr>, exp: Poly },
    /// `(arg; q^step)_count`
    Poch { arg: Box<QExpr>, step: Exp, count: Poly },
    /// `(arg; q^step)_inf`, `step > 0`.
    PochInf { arg: Box<QExpr>, step: Exp },
    /// `(1 - q^n + k q^(2n)) / k`
    QuadRatio { k: Box<QExpr>, n: Poly },
    /// `(1 - x q^(2n)) / (1 - x)`
    SqrtPairRatio { x: Box<QExpr>, n: Poly },
    Add(Vec<QExpr>),
    Mul(Vec<QExpr>),
    Div(Box<QExpr>, Box<QExpr>),
    Neg(Box<QExpr>),
    /// `zero` when `on` evaluates to 0, `nonzero` otherwise.
    CaseSplit { on: Poly, zero: Box<QExpr>, nonzero: Box<QExpr> },
    /// `body` when `modulus` divides `of`, 0 otherwise.
    Divides { modulus: i64, of: Poly, body: Box<QExpr> },
    /// Sum of `body` over `var = 0, 1, ...`, through `floor(upper)` if given.
    Sum { var: Var, upper: Option<Poly>, body: Box<QExpr> },
    /// Sum over all `n, j >= 0`.
    DoubleSum { body: Box<QExpr> },
}

impl QExpr {
    pub fn zero() -> Self {
        QExpr::Const(int(0))
    }

    pub fn one() -> Self {
        QExpr::Const(int(1))
    }

    pub fn is_const(&self, c: i64) -> bool {
        matches!(self, QExpr::Const(r) if *r == int(c))
    }

    /// Visits every node, parents before children.
    pub fn walk(&self, f: &mut impl FnMut(&QExpr)) {
        f(self);
        match self {
            QExpr::Const(_) | QExpr::Param(_) | QExpr::QPow(_) | QExpr::SignPow(_) => {}
            QExpr::Pow { base: x, .. }
            | QExpr::Poch { arg: x, .. }
            | QExpr::PochInf { arg: x, .. }
            | QExpr::QuadRatio { k: x, .. }
            | QExpr::SqrtPairRatio { x, .. }
            | QExpr::Neg(x)
            | QExpr::Divides { body: x, .. }
            | QExpr::Sum { body: x, .. }
            | QExpr::DoubleSum { body: x } => x.walk(f),
            QExpr::Add(v) | QExpr::Mul(v) => v.iter().for_each(|e| e.walk(f)),
            QExpr::Div(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            QExpr::CaseSplit { zero, nonzero, .. } => {
                zero.walk(f);
                nonzero.walk(f);
            }
        }
    }

    /// Names of all parameters mentioned.
    pub fn params(&self) -> std::collections::BTreeSet<String> {
        let mut out = std::collections::BTreeSet::new();
        self.walk(&mut |e| {
            if let QExpr::Param(p) = e {
                out.insert(p.clone());
            }
        });
        out
    }

    pub fn contains_sum(&self) -> bool {
        let mut found = false;
        self.walk(&mut |e| found |= matches!(e, QExpr::Sum { .. } | QExpr::DoubleSum { .. }));
        found
    }

    pub fn pow(self, exp: impl Into<Poly>) -> QExpr {
        QExpr::Pow { base: Box::new(self), exp: exp.into() }
    }
}

// Builders used by the catalogs.

pub fn c(n: i64) -> QExpr {
    QExpr::Const(int(n))
}

pub fn cr(n: i64, d: i64) -> QExpr {
    QExpr::Const(crate::rational::rat(n, d))
}

pub fn p(name: &str) -> QExpr {
    QExpr::Param(name.to_string())
}

/// `q^e`
pub fn q(e: impl Into<Poly>) -> QExpr {
    QExpr::QPow(e.into())
}

/// `(-1)^e`
pub fn sign(e: impl Into<Poly>) -> QExpr {
    QExpr::SignPow(e.into())
}

pub fn poch(arg: QExpr, step: impl Into<Exp>, count: impl Into<Poly>) -> QExpr {
    QExpr::Poch { arg: Box::new(arg), step: step.into(), count: count.into() }
}

/// `(arg; q)_count`
pub fn pq(arg: QExpr, count: impl Into<Poly>) -> QExpr {
    poch(arg, 1, count)
}

pub fn poch_inf(arg: QExpr, step: impl Into<Exp>) -> QExpr {
    QExpr::PochInf { arg: Box::new(arg), step: step.into() }
}

pub fn quad(k: QExpr, n: impl Into<Poly>) -> QExpr {
    QExpr::QuadRatio { k: Box::new(k), n: n.into() }
}

pub fn sqrt_pair(x: QExpr, n: impl Into<Poly>) -> QExpr {
    QExpr::SqrtPairRatio { x: Box::new(x), n: n.into() }
}

pub fn case0(on: impl Into<Poly>, zero: QExpr, nonzero: QExpr) -> QExpr {
    QExpr::CaseSplit { on: on.into(), zero: Box::new(zero), nonzero: Box::new(nonzero) }
}

pub fn divides(modulus: i64, of: impl Into<Poly>, body: QExpr) -> QExpr {
    QExpr::Divides { modulus, of: of.into(), body: Box::new(body) }
}

pub fn sum(var: Var, body: QExpr) -> QExpr {
    QExpr::Sum { var, upper: None, body: Box::new(body) }
}

pub fn sum_to(var: Var, upper: impl Into<Poly>, body: QExpr) -> QExpr {
    QExpr::Sum { var, upper: Some(upper.into()), body: Box::new(body) }
}

pub fn double_sum(body: QExpr) -> QExpr {
    QExpr::DoubleSum { body: Box::new(body) }
}

/// Product of several Pochhammer symbols sharing a step and count.
pub fn pochs(args: Vec<QExpr>, step: impl Into<Exp>, count: impl Into<Poly>) -> QExpr {
    let (step, count) = (step.into(), count.into());
    QExpr::Mul(args.into_iter().map(|a| poch(a, step, count)).collect())
}

impl ops::Mul for QExpr {
    type Output = QExpr;
    fn mul(self, o: QExpr) -> QExpr {
        let mut v = match self {
            QExpr::Mul(v) => v,
            e => vec![e],
        };
        match o {
            QExpr::Mul(w) => v.extend(w),
            e => v.push(e),
        }
        QExpr::Mul(v)
    }
}

impl ops::Div for QExpr {
    type Output = QExpr;
    fn div(self, o: QExpr) -> QExpr {
        QExpr::Div(Box::new(self), Box::new(o))
    }
}

impl ops::Add for QExpr {
    type Output = QExpr;
    fn add(self, o: QExpr) -> QExpr {
        let mut v = match self {
            QExpr::Add(v) => v,
            e => vec![e],
        };
        match o {
            QExpr::Add(w) => v.extend(w),
            e => v.push(e),
        }
        QExpr::Add(v)
    }
}

impl ops::Sub for QExpr {
    type Output = QExpr;
    fn sub(self, o: QExpr) -> QExpr {
        self + (-o)
    }
}

impl ops::Neg for QExpr {
    type Output = QExpr;
    fn neg(self) -> QExpr {
        QExpr::Neg(Box::new(self))
    }
}

impl From<i64> for QExpr {
    fn from(n: i64) -> Self {
        c(n)
    }
}

impl std::fmt::Debug for QExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}
