use std::cell::{Cell, RefCell};

use num_traits::{One, Zero};
use thiserror::Error;

use super::{Monomial, ParamBinding, ParamValue, Poly, QExpr, Var};
use crate::rational::{exp_to_t, Exp, QRational};
use crate::series::{QSeries, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("singular: {0}")]
    Singular(String),
    #[error("parameter `{0}` is not bound")]
    UnboundParam(String),
    #[error("variable `{0}` is not bound here")]
    UnboundVar(&'static str),
    #[error("{0}")]
    Domain(String),
    #[error("sum over {var} did not settle within {cap} terms")]
    NonConvergent { var: &'static str, cap: i64 },
    #[error("valuation t^{valuation} fell below the floor t^{floor}")]
    ValuationFloor { valuation: i64, floor: i64 },
    #[error("could not reach the requested order after repeated deepening")]
    PrecisionExhausted,
}

impl EvalError {
    pub fn is_singular(&self) -> bool {
        matches!(self, EvalError::Singular(_) | EvalError::Series(SeriesError::DivisionByZero))
    }

    pub fn is_nonconvergent(&self) -> bool {
        matches!(self, EvalError::NonConvergent { .. } | EvalError::PrecisionExhausted)
    }
}

/// Stopping rule for unbounded sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SumPolicy {
    /// Stop after this many consecutive terms vanish below the target order.
    pub quiet_run: usize,
    /// Same, counted in anti-diagonals, for double sums.
    pub quiet_diagonals: usize,
    /// Hard cap on the index; `None` derives `4 * order + 64`.
    pub cap: Option<i64>,
    /// Lowest t-valuation a summand may reach, as a multiple of `-order`.
    pub floor_factor: i64,
}

impl Default for SumPolicy {
    fn default() -> Self {
        SumPolicy { quiet_run: 5, quiet_diagonals: 3, cap: None, floor_factor: 10 }
    }
}

/// Largest summation indices consumed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TermsUsed {
    pub n: i64,
    pub j: Option<i64>,
}

impl TermsUsed {
    pub fn merge(self, o: TermsUsed) -> TermsUsed {
        TermsUsed {
            n: self.n.max(o.n),
            j: match (self.j, o.j) {
                (Some(a), Some(b)) => Some(a.max(b)),
                (a, b) => a.or(b),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub(super) struct Env {
    pub(super) n: Option<i64>,
    pub(super) j: Option<i64>,
}

impl Env {
    pub(super) fn with(self, v: Var, x: i64) -> Env {
        match v {
            Var::N => Env { n: Some(x), ..self },
            Var::J => Env { j: Some(x), ..self },
        }
    }
}

/// Evaluates expressions to a fixed working precision under one binding.
pub struct EvalContext<'a> {
    binding: &'a ParamBinding,
    scale: u32,
    prec: i64,
    policy: SumPolicy,
    used: RefCell<TermsUsed>,
    structural_zero: Cell<bool>,
}

impl<'a> EvalContext<'a> {
    /// `prec_t` is the working precision in `t = q^(1/scale)` units.
    pub fn new(binding: &'a ParamBinding, scale: u32, prec_t: i64) -> Self {
        Self::with_policy(binding, scale, prec_t, SumPolicy::default())
    }

    pub fn with_policy(binding: &'a ParamBinding, scale: u32, prec_t: i64, policy: SumPolicy) -> Self {
        EvalContext {
            binding,
            scale,
            prec: prec_t,
            policy,
            used: RefCell::new(TermsUsed::default()),
            structural_zero: Cell::new(false),
        }
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn prec_t(&self) -> i64 {
        self.prec
    }

    pub fn terms_used(&self) -> TermsUsed {
        *self.used.borrow()
    }

    pub fn one(&self) -> QSeries {
        QSeries::one_t(self.scale, self.prec)
    }

    /// Evaluates a closed expression (no free `n`, `j`).
    pub fn eval(&self, e: &QExpr) -> Result<QSeries, EvalError> {
        self.apply(e, Env::default(), self.one(), false)
    }

    /// Evaluates with `n` (and optionally `j`) bound.
    pub fn eval_at(&self, e: &QExpr, n: i64, j: Option<i64>) -> Result<QSeries, EvalError> {
        self.apply(e, Env { n: Some(n), j }, self.one(), false)
    }

    /// Multiplies `acc` by the value of `e` (or divides, if `inverse`).
    pub fn apply_to(&self, e: &QExpr, n: Option<i64>, acc: QSeries, inverse: bool) -> Result<QSeries, EvalError> {
        self.apply(e, Env { n, j: None }, acc, inverse)
    }

    /// Evaluates a monomial-valued expression.
    pub fn monomial(&self, e: &QExpr, n: Option<i64>) -> Result<Monomial, EvalError> {
        self.mono(e, Env { n, j: None })
    }

    /// `e` in units of `t = q^(1/scale)`.
    pub fn t(&self, e: Exp) -> Result<i64, EvalError> {
        exp_to_t(e, self.scale)
            .ok_or(EvalError::Series(SeriesError::NotRepresentable { exponent: e, scale: self.scale }))
    }

    pub(super) fn poly(&self, p: &Poly, env: Env) -> Result<Exp, EvalError> {
        if p.uses(Var::N) && env.n.is_none() {
            return Err(EvalError::UnboundVar("n"));
        }
        if p.uses(Var::J) && env.j.is_none() {
            return Err(EvalError::UnboundVar("j"));
        }
        Ok(p.eval(env.n.unwrap_or(0), env.j.unwrap_or(0)))
    }

    pub(super) fn int_poly(&self, p: &Poly, env: Env, what: &str) -> Result<i64, EvalError> {
        let v = self.poly(p, env)?;
        if v.is_integer() {
            Ok(v.to_integer())
        } else {
            Err(EvalError::Domain(format!("{what} `{p}` evaluates to non-integer {v}")))
        }
    }

    pub(super) fn count(&self, p: &Poly, env: Env) -> Result<i64, EvalError> {
        let k = self.int_poly(p, env, "Pochhammer count")?;
        if k < 0 {
            return Err(EvalError::Domain(format!("Pochhammer count `{p}` is negative ({k})")));
        }
        Ok(k)
    }

    pub(super) fn mono(&self, e: &QExpr, env: Env) -> Result<Monomial, EvalError> {
        Ok(match e {
            QExpr::Const(c) => Monomial::constant(c.clone()),
            QExpr::Param(name) => match self.binding.get(name) {
                Some(ParamValue::Value(m)) => m.clone(),
                Some(ParamValue::Infinity) => {
                    return Err(EvalError::Domain(format!("`{name}` is infinite in a finite position")))
                }
                None => return Err(EvalError::UnboundParam(name.clone())),
            },
            QExpr::QPow(p) => Monomial::q_pow(self.poly(p, env)?),
            QExpr::SignPow(p) => {
                let k = self.int_poly(p, env, "sign exponent")?;
                Monomial::constant(if k.rem_euclid(2) == 0 { QRational::one() } else { -QRational::one() })
            }
            QExpr::Pow { base, exp } => {
                let b = self.mono(base, env)?;
                let k = self.int_poly(exp, env, "power")?;
                b.pow(k).ok_or_else(|| EvalError::Singular(format!("negative power of zero `{e}`")))?
            }
            QExpr::Mul(v) => {
                let mut m = Monomial::one();
                for x in v {
                    m = m.mul(&self.mono(x, env)?);
                }
                m
            }
            QExpr::Div(a, b) => {
                let (a, bm) = (self.mono(a, env)?, self.mono(b, env)?);
                a.div(&bm).ok_or_else(|| EvalError::Singular(format!("division by zero in `{e}`")))?
            }
            QExpr::Neg(x) => self.mono(x, env)?.neg(),
            QExpr::CaseSplit { on, zero, nonzero } => {
                if self.poly(on, env)?.is_zero() {
                    self.mono(zero, env)?
                } else {
                    self.mono(nonzero, env)?
                }
            }
            _ => return Err(EvalError::Domain(format!("`{e}` is not a monomial"))),
        })
    }

    pub(super) fn is_monomial_leaf(e: &QExpr) -> bool {
        matches!(
            e,
            QExpr::Const(_) | QExpr::Param(_) | QExpr::QPow(_) | QExpr::SignPow(_) | QExpr::Pow { .. }
        )
    }

    fn apply_monomial(&self, acc: QSeries, m: &Monomial, inverse: bool) -> Result<QSeries, EvalError> {
        let t = self.t(m.exp)?;
        if inverse {
            if m.is_zero() {
                return Err(EvalError::Singular("division by zero".into()));
            }
            Ok(acc.scale_by(&m.coeff.recip()).shift_t(-t))
        } else if m.is_zero() {
            Ok(QSeries::zero_t(self.scale, acc.prec_t().max(self.prec)))
        } else {
            Ok(acc.scale_by(&m.coeff).shift_t(t))
        }
    }

    fn binomial(&self, acc: QSeries, c: &QRational, m: i64, inverse: bool) -> Result<QSeries, EvalError> {
        if inverse {
            acc.div_binomial_t(c, m).map_err(|_| EvalError::Singular(format!("factor (1 - {c} t^{m}) vanishes")))
        } else {
            Ok(acc.mul_binomial_t(c, m))
        }
    }

    /// Exact polynomial `terms` with enough headroom to be multiplied into or
    /// divided out of `acc` without limiting its precision.
    fn exact_poly(&self, terms: &[(i64, QRational)], acc: &QSeries) -> QSeries {
        let lo = terms.iter().filter(|t| !t.1.is_zero()).map(|t| t.0).min().unwrap_or(0);
        let head = (acc.prec_t() - acc.lo_t()).max(0) + 1;
        let hi = terms.iter().map(|t| t.0).max().unwrap_or(0);
        QSeries::from_terms_t(self.scale, terms, (lo + head).max(hi))
    }

    /// Whether the monomial leaves of a product land on the `t` grid.
    pub(super) fn on_grid(&self, e: &QExpr, env: Env) -> bool {
        let leaves: Vec<&QExpr> = match e {
            QExpr::Mul(v) => v.iter().filter(|x| Self::is_monomial_leaf(x)).collect(),
            x if Self::is_monomial_leaf(x) => vec![x],
            _ => return true,
        };
        let mut m = Monomial::one();
        for x in leaves {
            match self.mono(x, env) {
                Ok(y) => m = m.mul(&y),
                Err(_) => return false,
            }
        }
        self.t(m.exp).is_ok()
    }

    fn apply(&self, e: &QExpr, env: Env, acc: QSeries, inverse: bool) -> Result<QSeries, EvalError> {
        match e {
            QExpr::Const(_) | QExpr::Param(_) | QExpr::QPow(_) | QExpr::SignPow(_) | QExpr::Pow { .. } => {
                let m = self.mono(e, env)?;
                self.apply_monomial(acc, &m, inverse)
            }
            QExpr::Mul(v) => {
                let mut m = Monomial::one();
                for x in v.iter().filter(|x| Self::is_monomial_leaf(x)) {
                    m = m.mul(&self.mono(x, env)?);
                }
                if self.t(m.exp).is_err() {
                    if let Some(e) = distribute(v, &m, |t| self.on_grid(t, env)) {
                        return self.apply(&e, env, acc, inverse);
                    }
                }
                let mut acc = self.apply_monomial(acc, &m, inverse)?;
                for x in v.iter().filter(|x| !Self::is_monomial_leaf(x)) {
                    acc = self.apply(x, env, acc, inverse)?;
                }
                Ok(acc)
            }
            QExpr::Div(a, b) => {
                let acc = self.apply(a, env, acc, inverse)?;
                self.apply(b, env, acc, !inverse)
            }
            QExpr::Neg(x) => self.apply(x, env, acc.neg(), inverse),
            QExpr::Poch { arg, step, count } => {
                let x = self.mono(arg, env)?;
                let k = self.count(count, env)?;
                let (x0, st) = (self.t(x.exp)?, self.t(*step)?);
                let mut acc = acc;
                for i in 0..k {
                    acc = self.binomial(acc, &x.coeff, x0 + i * st, inverse)?;
                }
                Ok(acc)
            }
            QExpr::PochInf { arg, step } => {
                let x = self.mono(arg, env)?;
                let (x0, st) = (self.t(x.exp)?, self.t(*step)?);
                if st <= 0 || x0 < 0 {
                    return Err(EvalError::Domain(format!(
                        "infinite product `{e}` needs a positive step and an argument of nonnegative order"
                    )));
                }
                let mut acc = acc;
                let mut i = 0;
                loop {
                    let m = x0 + i * st;
                    if m > 0 && m > acc.prec_t() - acc.lo_t() {
                        break;
                    }
                    acc = self.binomial(acc, &x.coeff, m, inverse)?;
                    i += 1;
                }
                Ok(acc)
            }
            QExpr::QuadRatio { k, n } => {
                let km = self.mono(k, env)?;
                let nt = self.t(Exp::from_integer(self.count(n, env)?))?;
                let kt = self.t(km.exp)?;
                let terms = vec![(0, QRational::one()), (nt, -QRational::one()), (2 * nt + kt, km.coeff.clone())];
                if inverse {
                    let acc = self.apply_monomial(acc, &km, false)?;
                    let p = self.exact_poly(&terms, &acc);
                    acc.div(&p).map_err(|_| EvalError::Singular(format!("`{e}` vanishes")))
                } else {
                    let p = self.exact_poly(&terms, &acc);
                    let acc = acc.mul(&p)?;
                    self.apply_monomial(acc, &km, true)
                }
            }
            QExpr::SqrtPairRatio { x, n } => {
                let xm = self.mono(x, env)?;
                let nt = self.t(Exp::from_integer(self.count(n, env)?))?;
                let xt = self.t(xm.exp)?;
                let acc = self.binomial(acc, &xm.coeff, xt + 2 * nt, inverse)?;
                self.binomial(acc, &xm.coeff, xt, !inverse)
            }
            QExpr::CaseSplit { on, zero, nonzero } => {
                if self.poly(on, env)?.is_zero() {
                    self.apply(zero, env, acc, inverse)
                } else {
                    self.apply(nonzero, env, acc, inverse)
                }
            }
            QExpr::Divides { modulus, of, body } => {
                let v = self.int_poly(of, env, "divisibility argument")?;
                if v.rem_euclid(*modulus) == 0 {
                    self.apply(body, env, acc, inverse)
                } else if inverse {
                    Err(EvalError::Singular(format!("division by the vanishing indicator `{e}`")))
                } else {
                    self.structural_zero.set(true);
                    Ok(QSeries::zero_t(self.scale, acc.prec_t().max(self.prec)))
                }
            }
            QExpr::Add(_) | QExpr::Sum { .. } | QExpr::DoubleSum { .. } => {
                let s = self.additive(e, env)?;
                if inverse {
                    acc.div(&s).map_err(|_| EvalError::Singular(format!("`{e}` vanishes to working order")))
                } else {
                    Ok(acc.mul(&s)?)
                }
            }
        }
    }

    fn cap(&self) -> i64 {
        self.policy.cap.unwrap_or(4 * (self.prec.max(0) / self.scale as i64) + 64)
    }

    fn record(&self, v: Var, x: i64) {
        let mut u = self.used.borrow_mut();
        match v {
            Var::N => u.n = u.n.max(x),
            Var::J => u.j = Some(u.j.map_or(x, |j| j.max(x))),
        }
    }

    /// Evaluates one summand; reports whether it is negligible at the working
    /// order, or `None` if it vanished for a structural reason (a
    /// divisibility guard) and so says nothing about convergence.
    fn summand(&self, body: &QExpr, env: Env) -> Result<(QSeries, Option<bool>), EvalError> {
        self.structural_zero.set(false);
        let s = self.apply(body, env, self.one(), false)?;
        let floor = -self.policy.floor_factor * self.prec.max(self.scale as i64);
        if let Some(v) = s.valuation_t() {
            if v < floor {
                return Err(EvalError::ValuationFloor { valuation: v, floor });
            }
        }
        let quiet = if s.is_zero() && self.structural_zero.get() { None } else { Some(s.lo_t() > self.prec) };
        Ok((s, quiet))
    }

    fn accumulate(total: Option<QSeries>, s: QSeries) -> Result<Option<QSeries>, EvalError> {
        Ok(Some(match total {
            None => s,
            Some(t) => t.add(&s)?,
        }))
    }

    fn additive(&self, e: &QExpr, env: Env) -> Result<QSeries, EvalError> {
        let mut total: Option<QSeries> = None;
        match e {
            QExpr::Add(v) => {
                for x in v {
                    total = Self::accumulate(total, self.apply(x, env, self.one(), false)?)?;
                }
            }
            QExpr::Sum { var, upper: Some(u), body } => {
                let top = self.poly(u, env)?.floor().to_integer();
                for i in 0..=top {
                    self.record(*var, i);
                    total = Self::accumulate(total, self.apply(body, env.with(*var, i), self.one(), false)?)?;
                }
            }
            QExpr::Sum { var, upper: None, body } => {
                let cap = self.cap();
                let mut run = 0;
                let mut i = 0;
                while run < self.policy.quiet_run {
                    if i > cap {
                        return Err(EvalError::NonConvergent { var: var.name(), cap });
                    }
                    self.record(*var, i);
                    let (s, quiet) = self.summand(body, env.with(*var, i))?;
                    match quiet {
                        Some(true) => run += 1,
                        Some(false) => run = 0,
                        None => {}
                    }
                    total = Self::accumulate(total, s)?;
                    i += 1;
                }
            }
            QExpr::DoubleSum { body } => {
                let cap = self.cap();
                let mut run = 0;
                let mut m = 0;
                while run < self.policy.quiet_diagonals {
                    if m > cap {
                        return Err(EvalError::NonConvergent { var: "n+j", cap });
                    }
                    let mut diagonal_quiet = true;
                    let mut informative = false;
                    for n in 0..=m {
                        let j = m - n;
                        self.record(Var::N, n);
                        self.record(Var::J, j);
                        let (s, quiet) = self.summand(body, Env { n: Some(n), j: Some(j) })?;
                        if let Some(q) = quiet {
                            informative = true;
                            diagonal_quiet &= q;
                        }
                        total = Self::accumulate(total, s)?;
                    }
                    if informative {
                        run = if diagonal_quiet { run + 1 } else { 0 };
                    }
                    m += 1;
                }
            }
            _ => unreachable!("additive called on a product node"),
        }
        Ok(total.unwrap_or_else(|| QSeries::zero_t(self.scale, self.prec)))
    }
}

/// Rewrites the product `v` with its monomial leaves (worth `m`) pushed into
/// one of the sums among the other factors: the first whose every term
/// `fits` once multiplied by `m`, else the first sum. Used when `m` alone has
/// an exponent off the `t` grid, as in `q^(-n^2/2) (q^(-n/2) + q^(n/2))`.
pub(super) fn distribute(v: &[QExpr], m: &Monomial, fits: impl Fn(&QExpr) -> bool) -> Option<QExpr> {
    let rest: Vec<&QExpr> = v.iter().filter(|x| !EvalContext::is_monomial_leaf(x)).collect();
    let spread = |terms: &[QExpr]| -> Vec<QExpr> {
        terms
            .iter()
            .map(|t| {
                let mut f = vec![QExpr::Const(m.coeff.clone()), QExpr::QPow(Poly::constant(m.exp))];
                match t {
                    QExpr::Mul(w) => f.extend(w.iter().cloned()),
                    t => f.push(t.clone()),
                }
                QExpr::Mul(f)
            })
            .collect()
    };
    let sums: Vec<(usize, Vec<QExpr>)> = rest
        .iter()
        .enumerate()
        .filter_map(|(i, x)| match x {
            QExpr::Add(terms) => Some((i, spread(terms))),
            _ => None,
        })
        .collect();
    let (i, terms) = sums.iter().find(|(_, t)| t.iter().all(&fits)).or_else(|| sums.first())?;
    let mut out: Vec<QExpr> = rest.iter().map(|x| (*x).clone()).collect();
    out[*i] = QExpr::Add(terms.clone());
    Some(QExpr::Mul(out))
}

/// Evaluates `e` so the result is trusted through `q^order`, deepening the
/// working precision when negative exponents eat into it.
pub fn eval_to_order(
    e: &QExpr,
    binding: &ParamBinding,
    scale: u32,
    order: i64,
    policy: SumPolicy,
) -> Result<(QSeries, TermsUsed), EvalError> {
    let target = order * scale as i64;
    let mut work = target;
    for _ in 0..6 {
        let ctx = EvalContext::with_policy(binding, scale, work, policy);
        let s = ctx.eval(e)?;
        if s.prec_t() >= target {
            return Ok((s.truncate_t(target), ctx.terms_used()));
        }
        work += target - s.prec_t();
    }
    Err(EvalError::PrecisionExhausted)
}
