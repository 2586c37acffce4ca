//! q-Pochhammer primitives on top of [`QSeries`].

use crate::expr::{
    self as x, p, q, quad, sqrt_pair, EvalContext, EvalError, Monomial, ParamBinding, ParamValue, QExpr, SumPolicy,
    TermsUsed, Var,
};
use crate::rational::{Exp, QRational};
use crate::series::QSeries;

fn bind(name: &str, m: &Monomial) -> ParamBinding {
    ParamBinding::from([(name.to_string(), ParamValue::Value(m.clone()))])
}

fn run(e: &QExpr, binding: &ParamBinding, scale: u32, order: i64) -> Result<QSeries, EvalError> {
    EvalContext::new(binding, scale, order * scale as i64).eval(e)
}

/// `(x; q^step)_count` to `q^order`.
pub fn poch(x: &Monomial, step: Exp, count: u32, scale: u32, order: i64) -> Result<QSeries, EvalError> {
    run(&x::poch(p("x"), step, count as i64), &bind("x", x), scale, order)
}

/// `(x; q^step)_inf`. Needs `step > 0` and `x` of nonnegative q-order.
pub fn poch_inf(x: &Monomial, step: Exp, scale: u32, order: i64) -> Result<QSeries, EvalError> {
    run(&x::poch_inf(p("x"), step), &bind("x", x), scale, order)
}

/// Product side of the Jacobi triple product, `(-q/x, -q x, q^2; q^2)_inf`,
/// which equals `sum_n x^n q^(n^2)` over all integers `n`.
pub fn jtp(x: &Monomial, scale: u32, order: i64) -> Result<QSeries, EvalError> {
    run(&jtp_product(), &bind("x", x), scale, order)
}

pub fn jtp_product() -> QExpr {
    x::poch_inf(-(q(1) / p("x")), 2) * x::poch_inf(-(q(1) * p("x")), 2) * x::poch_inf(q(2), 2)
}

/// `(1 - q^n + k q^(2n)) / k`
pub fn quad_poch_ratio(k: &QRational, n: u32, scale: u32, order: i64) -> Result<QSeries, EvalError> {
    run(&quad(p("k"), n as i64), &bind("k", &Monomial::constant(k.clone())), scale, order)
}

/// `(1 - k q^(2n)) / (1 - k)`
pub fn sqrt_pair_ratio(k: &QRational, n: u32, scale: u32, order: i64) -> Result<QSeries, EvalError> {
    run(&sqrt_pair(p("k"), n as i64), &bind("k", &Monomial::constant(k.clone())), scale, order)
}

/// How far a hypergeometric sum runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumLimit {
    /// Through `n = N` inclusive.
    Upto(i64),
    /// Until the adaptive stopping rule fires.
    Adaptive,
}

/// `sum_n term(n)` where `term` may use the variable `n`.
pub fn hyper_sum(
    term: &QExpr,
    limit: SumLimit,
    binding: &ParamBinding,
    scale: u32,
    order: i64,
) -> Result<(QSeries, TermsUsed), EvalError> {
    let e = match limit {
        SumLimit::Upto(n) => x::sum_to(Var::N, n, term.clone()),
        SumLimit::Adaptive => x::sum(Var::N, term.clone()),
    };
    let ctx = EvalContext::with_policy(binding, scale, order * scale as i64, SumPolicy::default());
    let s = ctx.eval(&e)?;
    Ok((s, ctx.terms_used()))
}
