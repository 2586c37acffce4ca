use std::collections::BTreeMap;

use thiserror::Error;

use super::{c, q, Poly, QExpr, Var};
use crate::rational::Exp;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("substitution raises a polynomial above degree two in `{0}`")]
    DegreeOverflow(String),
    #[error("`{0}` has no finite image under q -> 1/q")]
    NoDual(String),
}

/// Simultaneous substitution: variables by polynomials, parameters by
/// expressions, and optionally `q -> 1/q`.
#[derive(Debug, Clone, Default)]
pub struct Subst {
    pub n: Option<Poly>,
    pub j: Option<Poly>,
    pub params: BTreeMap<String, QExpr>,
    pub invert_q: bool,
}

impl Subst {
    pub fn var(v: Var, with: Poly) -> Self {
        let mut s = Subst::default();
        match v {
            Var::N => s.n = Some(with),
            Var::J => s.j = Some(with),
        }
        s
    }

    pub fn param(name: &str, with: QExpr) -> Self {
        let mut s = Subst::default();
        s.params.insert(name.to_string(), with);
        s
    }

    pub fn and_param(mut self, name: &str, with: QExpr) -> Self {
        self.params.insert(name.to_string(), with);
        self
    }

    pub fn apply(&self, e: &QExpr) -> Result<QExpr, SubstError> {
        self.go(e, self.n, self.j)
    }

    fn poly(&self, x: &Poly, n: Option<Poly>, j: Option<Poly>, e: &QExpr) -> Result<Poly, SubstError> {
        x.compose(&n.unwrap_or_else(Poly::n), &j.unwrap_or_else(Poly::j))
            .ok_or_else(|| SubstError::DegreeOverflow(e.to_string()))
    }

    fn go(&self, e: &QExpr, n: Option<Poly>, j: Option<Poly>) -> Result<QExpr, SubstError> {
        let rec = |x: &QExpr| self.go(x, n, j).map(Box::new);
        let neg_if = |s: Exp| if self.invert_q { -s } else { s };
        Ok(match e {
            QExpr::Const(_) => e.clone(),
            QExpr::Param(name) => self.params.get(name).cloned().unwrap_or_else(|| e.clone()),
            QExpr::QPow(x) => {
                let x = self.poly(x, n, j, e)?;
                QExpr::QPow(if self.invert_q { -x } else { x })
            }
            QExpr::SignPow(x) => QExpr::SignPow(self.poly(x, n, j, e)?),
            QExpr::Pow { base, exp } => QExpr::Pow { base: rec(base)?, exp: self.poly(exp, n, j, e)? },
            QExpr::Poch { arg, step, count } => {
                QExpr::Poch { arg: rec(arg)?, step: neg_if(*step), count: self.poly(count, n, j, e)? }
            }
            QExpr::PochInf { arg, step } => {
                if self.invert_q {
                    return Err(SubstError::NoDual(e.to_string()));
                }
                QExpr::PochInf { arg: rec(arg)?, step: *step }
            }
            QExpr::QuadRatio { k, n: m } if self.invert_q => {
                // expand so the inverted exponents stay explicit
                let kq = (**k).clone();
                let body = (c(1) - q(*m) + kq.clone() * q(*m * 2)) / kq;
                self.go(&body, n, j)?
            }
            QExpr::SqrtPairRatio { x, n: m } if self.invert_q => {
                let xq = (**x).clone();
                let body = (c(1) - xq.clone() * q(*m * 2)) / (c(1) - xq);
                self.go(&body, n, j)?
            }
            QExpr::QuadRatio { k, n: m } => QExpr::QuadRatio { k: rec(k)?, n: self.poly(m, n, j, e)? },
            QExpr::SqrtPairRatio { x, n: m } => {
                QExpr::SqrtPairRatio { x: rec(x)?, n: self.poly(m, n, j, e)? }
            }
            QExpr::Add(v) => QExpr::Add(v.iter().map(|x| self.go(x, n, j)).collect::<Result<_, _>>()?),
            QExpr::Mul(v) => QExpr::Mul(v.iter().map(|x| self.go(x, n, j)).collect::<Result<_, _>>()?),
            QExpr::Div(a, b) => QExpr::Div(rec(a)?, rec(b)?),
            QExpr::Neg(x) => QExpr::Neg(rec(x)?),
            QExpr::CaseSplit { on, zero, nonzero } => {
                QExpr::CaseSplit { on: self.poly(on, n, j, e)?, zero: rec(zero)?, nonzero: rec(nonzero)? }
            }
            QExpr::Divides { modulus, of, body } => {
                QExpr::Divides { modulus: *modulus, of: self.poly(of, n, j, e)?, body: rec(body)? }
            }
            QExpr::Sum { var, upper, body } => {
                let upper = upper.map(|u| self.poly(&u, n, j, e)).transpose()?;
                // the bound variable shadows any substitution for it
                let (bn, bj) = match var {
                    Var::N => (None, j),
                    Var::J => (n, None),
                };
                QExpr::Sum { var: *var, upper, body: Box::new(self.go(body, bn, bj)?) }
            }
            QExpr::DoubleSum { body } => QExpr::DoubleSum { body: Box::new(self.go(body, None, None)?) },
        })
    }
}
