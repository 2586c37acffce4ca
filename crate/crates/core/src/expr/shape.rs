//! Degree audit for finite expressions.
//!
//! A finite expression is a rational function of `t`. Its shape records the
//! numerator as an exponent window times named binomials `(1 - c t^m)`, and
//! the denominator as named binomials plus opaque polynomials of known degree,
//! all normalised to have a nonzero constant term. If `lhs - rhs` has
//! numerator degree at most `B`, agreement of the two series through `t^B`
//! proves the identity exactly.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use super::eval::{distribute, Env, EvalContext, EvalError};
use super::{ParamBinding, QExpr};
use crate::rational::{Exp, QRational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("`{0}` is not a finite expression")]
    NotFinite(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

type Binomials = BTreeMap<(QRational, i64), u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    pub zero: bool,
    pub lo: i64,
    pub hi: i64,
    pub num: Binomials,
    pub den: Binomials,
    pub opaque: i64,
}

fn degree(b: &Binomials) -> i64 {
    b.iter().map(|((_, m), k)| m * *k as i64).sum()
}

impl Shape {
    fn zero() -> Shape {
        Shape { zero: true, lo: 0, hi: 0, num: Binomials::new(), den: Binomials::new(), opaque: 0 }
    }

    fn one() -> Shape {
        Shape { zero: false, ..Shape::zero() }
    }

    fn monomial(t: i64) -> Shape {
        Shape { lo: t, hi: t, ..Shape::one() }
    }

    /// Upper bound on the numerator degree.
    pub fn numerator_degree(&self) -> i64 {
        self.hi + degree(&self.num)
    }

    fn cancel(&mut self) {
        let keys: Vec<_> = self.num.keys().cloned().collect();
        for k in keys {
            if let Some(d) = self.den.get_mut(&k) {
                let n = self.num.get_mut(&k).unwrap();
                let c = (*n).min(*d);
                *n -= c;
                *d -= c;
            }
        }
        self.num.retain(|_, v| *v > 0);
        self.den.retain(|_, v| *v > 0);
    }

    fn mul(mut self, o: Shape) -> Shape {
        if self.zero || o.zero {
            return Shape::zero();
        }
        self.lo += o.lo;
        self.hi += o.hi;
        for (k, v) in o.num {
            *self.num.entry(k).or_default() += v;
        }
        for (k, v) in o.den {
            *self.den.entry(k).or_default() += v;
        }
        self.opaque += o.opaque;
        self.cancel();
        self
    }

    fn inverse(self) -> Result<Shape, EvalError> {
        if self.zero {
            return Err(EvalError::Singular("division by an expression that is identically zero".into()));
        }
        let (lo, hi, opaque) = if self.lo == self.hi {
            (-self.lo, -self.lo, self.opaque)
        } else {
            (-self.hi, -self.lo, self.opaque + self.hi - self.lo)
        };
        // opaque denominators move to the numerator as polynomials of that degree
        Ok(Shape { zero: false, lo, hi: hi + self.opaque, num: self.den, den: self.num, opaque: opaque - self.opaque })
    }

    fn add(self, o: Shape) -> Shape {
        if self.zero {
            return o;
        }
        if o.zero {
            return self;
        }
        let mut den = self.den.clone();
        for (k, v) in &o.den {
            let e = den.entry(k.clone()).or_default();
            *e = (*e).max(*v);
        }
        let mut common = Binomials::new();
        for (k, v) in &self.num {
            if let Some(w) = o.num.get(k) {
                common.insert(k.clone(), (*v).min(*w));
            }
        }
        let dl = degree(&den);
        let dc = degree(&common);
        let lift = |s: &Shape, other_opaque: i64| s.hi + dl - degree(&s.den) + other_opaque + degree(&s.num) - dc;
        let hi = lift(&self, o.opaque).max(lift(&o, self.opaque));
        Shape { zero: false, lo: self.lo.min(o.lo), hi, num: common, den, opaque: self.opaque + o.opaque }
    }

    fn binomial(c: &QRational, m: i64) -> Shape {
        let mut s = Shape::one();
        if c.is_zero() {
            return s;
        }
        if m == 0 {
            return if c.is_one() { Shape::zero() } else { s };
        }
        if m > 0 {
            s.num.insert((c.clone(), m), 1);
        } else {
            s.lo = m;
            s.hi = m;
            s.num.insert((c.recip(), -m), 1);
        }
        s
    }

    fn polynomial(terms: &[(i64, QRational)]) -> Shape {
        let mut merged: BTreeMap<i64, QRational> = BTreeMap::new();
        for (e, c) in terms {
            *merged.entry(*e).or_insert_with(QRational::zero) += c;
        }
        merged.retain(|_, c| !c.is_zero());
        match (merged.keys().next(), merged.keys().last()) {
            (Some(&lo), Some(&hi)) => Shape { lo, hi, ..Shape::one() },
            _ => Shape::zero(),
        }
    }
}

impl<'a> EvalContext<'a> {
    fn shape(&self, e: &QExpr, env: Env) -> Result<Shape, ShapeError> {
        Ok(match e {
            QExpr::Const(_) | QExpr::Param(_) | QExpr::QPow(_) | QExpr::SignPow(_) | QExpr::Pow { .. } => {
                let m = self.mono(e, env)?;
                if m.is_zero() {
                    Shape::zero()
                } else {
                    Shape::monomial(self.t(m.exp)?)
                }
            }
            QExpr::Poch { arg, step, count } => {
                let x = self.mono(arg, env)?;
                let k = self.count(count, env)?;
                let (x0, st) = (self.t(x.exp)?, self.t(*step)?);
                let mut s = Shape::one();
                for i in 0..k {
                    s = s.mul(Shape::binomial(&x.coeff, x0 + i * st));
                }
                s
            }
            QExpr::PochInf { .. } | QExpr::DoubleSum { .. } | QExpr::Sum { upper: None, .. } => {
                return Err(ShapeError::NotFinite(e.to_string()))
            }
            QExpr::QuadRatio { k, n } => {
                let km = self.mono(k, env)?;
                let nt = self.t(Exp::from_integer(self.count(n, env)?))?;
                let kt = self.t(km.exp)?;
                let top = Shape::polynomial(&[(0, QRational::one()), (nt, -QRational::one()), (2 * nt + kt, km.coeff.clone())]);
                if km.is_zero() {
                    return Err(EvalError::Singular(format!("`{e}` with k = 0")).into());
                }
                top.mul(Shape::monomial(-kt))
            }
            QExpr::SqrtPairRatio { x, n } => {
                let xm = self.mono(x, env)?;
                let nt = self.t(Exp::from_integer(self.count(n, env)?))?;
                let xt = self.t(xm.exp)?;
                Shape::binomial(&xm.coeff, xt + 2 * nt).mul(Shape::binomial(&xm.coeff, xt).inverse()?)
            }
            QExpr::Add(v) => {
                let mut s = Shape::zero();
                for x in v {
                    s = s.add(self.shape(x, env)?);
                }
                s
            }
            QExpr::Mul(v) => {
                let mut m = super::Monomial::one();
                for x in v.iter().filter(|x| EvalContext::is_monomial_leaf(x)) {
                    m = m.mul(&self.mono(x, env)?);
                }
                if self.t(m.exp).is_err() {
                    if let Some(e) = distribute(v, &m, |t| self.on_grid(t, env)) {
                        return self.shape(&e, env);
                    }
                }
                let mut s = if m.is_zero() { Shape::zero() } else { Shape::monomial(self.t(m.exp)?) };
                for x in v.iter().filter(|x| !EvalContext::is_monomial_leaf(x)) {
                    s = s.mul(self.shape(x, env)?);
                }
                s
            }
            QExpr::Div(a, b) => self.shape(a, env)?.mul(self.shape(b, env)?.inverse()?),
            QExpr::Neg(x) => self.shape(x, env)?,
            QExpr::CaseSplit { on, zero, nonzero } => {
                if self.poly(on, env)?.is_zero() {
                    self.shape(zero, env)?
                } else {
                    self.shape(nonzero, env)?
                }
            }
            QExpr::Divides { modulus, of, body } => {
                if self.int_poly(of, env, "divisibility argument")?.rem_euclid(*modulus) == 0 {
                    self.shape(body, env)?
                } else {
                    Shape::zero()
                }
            }
            QExpr::Sum { var, upper: Some(u), body } => {
                let top = self.poly(u, env)?.floor().to_integer();
                let mut s = Shape::zero();
                for i in 0..=top {
                    s = s.add(self.shape(body, env.with(*var, i))?);
                }
                s
            }
        })
    }
}

/// Numerator-degree bound (in `t` units) for `lhs - rhs`, or `None` when the
/// difference is structurally zero.
pub fn degree_bound(lhs: &QExpr, rhs: &QExpr, binding: &ParamBinding, scale: u32) -> Result<Option<i64>, ShapeError> {
    let ctx = EvalContext::new(binding, scale, 0);
    let s = ctx.shape(&(lhs.clone() - rhs.clone()), Env::default())?;
    Ok((!s.zero).then(|| s.numerator_degree()))
}
