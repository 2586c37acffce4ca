//! Structural simplification: flattens products, folds constants, cancels
//! identical numerator/denominator factors and pushes products into
//! `case0` branches. Sound up to removable singularities.

use num_traits::{One, Zero};

use super::{Poly, QExpr};
use crate::rational::QRational;

pub fn simplify(e: &QExpr) -> QExpr {
    match e {
        QExpr::Const(_) | QExpr::Mul(_) | QExpr::Div(..) | QExpr::Neg(_) => simplify_product(e),
        QExpr::Add(v) => simplify_add(v),
        QExpr::CaseSplit { on, zero, nonzero } => {
            if on.is_constant() {
                return simplify(if on.constant_term().is_zero() { zero } else { nonzero });
            }
            let (z, nz) = (simplify(zero), simplify(nonzero));
            if z == nz {
                z
            } else {
                QExpr::CaseSplit { on: *on, zero: Box::new(z), nonzero: Box::new(nz) }
            }
        }
        QExpr::Poch { count, .. } if *count == Poly::from(0) => QExpr::one(),
        QExpr::Poch { arg, step, count } => QExpr::Poch { arg: Box::new(simplify(arg)), step: *step, count: *count },
        QExpr::PochInf { arg, step } => QExpr::PochInf { arg: Box::new(simplify(arg)), step: *step },
        QExpr::Pow { base, exp } => QExpr::Pow { base: Box::new(simplify(base)), exp: *exp },
        QExpr::QuadRatio { k, n } => QExpr::QuadRatio { k: Box::new(simplify(k)), n: *n },
        QExpr::SqrtPairRatio { x, n } => QExpr::SqrtPairRatio { x: Box::new(simplify(x)), n: *n },
        QExpr::QPow(p) if *p == Poly::from(0) => QExpr::one(),
        QExpr::SignPow(p) if *p == Poly::from(0) => QExpr::one(),
        QExpr::Divides { modulus, of, body } => {
            QExpr::Divides { modulus: *modulus, of: *of, body: Box::new(simplify(body)) }
        }
        QExpr::Sum { var, upper, body } => QExpr::Sum { var: *var, upper: *upper, body: Box::new(simplify(body)) },
        QExpr::DoubleSum { body } => QExpr::DoubleSum { body: Box::new(simplify(body)) },
        QExpr::Param(_) | QExpr::QPow(_) | QExpr::SignPow(_) => e.clone(),
    }
}

fn simplify_add(v: &[QExpr]) -> QExpr {
    let mut terms = Vec::new();
    let mut constant = QRational::zero();
    for t in v {
        match simplify(t) {
            QExpr::Const(c) => constant += c,
            QExpr::Add(w) => {
                for x in w {
                    match x {
                        QExpr::Const(c) => constant += c,
                        x => terms.push(x),
                    }
                }
            }
            x => terms.push(x),
        }
    }
    if !constant.is_zero() {
        terms.insert(0, QExpr::Const(constant));
    }
    match terms.len() {
        0 => QExpr::zero(),
        1 => terms.pop().unwrap(),
        _ => QExpr::Add(terms),
    }
}

struct Product {
    coeff: QRational,
    num: Vec<QExpr>,
    den: Vec<QExpr>,
}

impl Product {
    fn collect(&mut self, e: &QExpr, inverted: bool, raw: bool) {
        match e {
            QExpr::Const(c) if !(inverted && c.is_zero()) => {
                if inverted {
                    self.coeff /= c;
                } else {
                    self.coeff *= c;
                }
            }
            QExpr::Neg(x) => {
                self.coeff = -std::mem::replace(&mut self.coeff, QRational::zero());
                self.collect(x, inverted, raw);
            }
            QExpr::Mul(v) => v.iter().for_each(|x| self.collect(x, inverted, raw)),
            QExpr::Div(a, b) => {
                self.collect(a, inverted, raw);
                self.collect(b, !inverted, raw);
            }
            other if raw => {
                let s = simplify(other);
                self.collect(&s, inverted, false);
            }
            other => {
                if inverted {
                    self.den.push(other.clone());
                } else {
                    self.num.push(other.clone());
                }
            }
        }
    }

    fn cancel(&mut self) {
        let mut i = 0;
        while i < self.den.len() {
            if let Some(j) = self.num.iter().position(|x| *x == self.den[i]) {
                self.num.remove(j);
                self.den.remove(i);
            } else {
                i += 1;
            }
        }
    }

    fn build(self) -> QExpr {
        if self.coeff.is_zero() {
            return QExpr::zero();
        }
        let product = |mut v: Vec<QExpr>| match v.len() {
            0 => QExpr::one(),
            1 => v.pop().unwrap(),
            _ => QExpr::Mul(v),
        };
        let neg = self.coeff < QRational::zero();
        let mag = if neg { -self.coeff } else { self.coeff };
        let mut num = self.num;
        if !mag.is_one() {
            num.insert(0, QExpr::Const(mag));
        }
        let body = if self.den.is_empty() {
            product(num)
        } else {
            QExpr::Div(Box::new(product(num)), Box::new(product(self.den)))
        };
        if neg {
            match body {
                QExpr::Const(c) => QExpr::Const(-c),
                b => QExpr::Neg(Box::new(b)),
            }
        } else {
            body
        }
    }
}

fn simplify_product(e: &QExpr) -> QExpr {
    let mut p = Product { coeff: QRational::one(), num: Vec::new(), den: Vec::new() };
    p.collect(e, false, true);
    if p.coeff.is_zero() {
        return QExpr::zero();
    }
    p.cancel();
    // distribute the remaining factors into the first case split
    if let Some(i) = p.num.iter().position(|x| matches!(x, QExpr::CaseSplit { .. })) {
        let QExpr::CaseSplit { on, zero, nonzero } = p.num.remove(i) else { unreachable!() };
        let rest = p.build();
        let branch = |b: QExpr| simplify(&(rest.clone() * b));
        let (z, nz) = (branch(*zero), branch(*nonzero));
        return if z == nz { z } else { QExpr::CaseSplit { on, zero: Box::new(z), nonzero: Box::new(nz) } };
    }
    p.build()
}
