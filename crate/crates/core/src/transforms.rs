//! Both sides of the Bailey-type transformations for a given pair.
//!
//! Each builder returns the two sides as expressions and as series. A `y` or
//! `z` bound to [`ParamValue::Infinity`] is handled here, symbolically: the
//! engine itself never evaluates an infinite parameter.
//!
//! ```text
//! (y; Q)_m (c/y)^m   ->  (-c)^m Q^(m(m-1)/2)
//! (c/y; Q)_m         ->  1
//! ```

use num_integer::Integer;
use thiserror::Error;

use crate::expr::{
    c, degree_bound, double_sum, eval_to_order, p, poch, poch_inf, pochs, q, sign, sqrt_pair, sum, sum_to, ParamBinding,
    ParamValue, Poly, QExpr, ShapeError, Subst, SumPolicy, TermsUsed, Var, EvalError,
};
use crate::pairs::{bailey_reduction, PairError, PairKind, PairSpec};
use crate::rational::{exp, Exp};
use crate::report::Mismatch;
use crate::series::QSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error("{0}")]
    Contract(String),
}

/// The two sides of one transformation under one binding.
#[derive(Debug, Clone)]
pub struct TransformSides {
    pub lhs_expr: QExpr,
    pub rhs_expr: QExpr,
    pub lhs: QSeries,
    pub rhs: QSeries,
    pub binding: ParamBinding,
    pub scale: u32,
    /// Order in `q` through which both series are exact.
    pub order: i64,
    pub terms_used: TermsUsed,
    /// Numerator degree bound of `lhs - rhs` in `t` units, for finite sides;
    /// `Some(None)` when the difference is structurally zero.
    pub degree_bound: Option<Option<i64>>,
}

impl TransformSides {
    pub fn first_mismatch(&self) -> Option<Mismatch> {
        let upto = self.order * self.scale as i64;
        self.lhs.first_difference_t(&self.rhs, upto).map(|e| Mismatch::at(e, &self.lhs, &self.rhs))
    }

    pub fn agree(&self) -> bool {
        self.first_mismatch().is_none()
    }

    /// Agreement through the degree bound, which makes the identity exact.
    pub fn proved(&self) -> bool {
        match self.degree_bound {
            Some(None) => true,
            Some(Some(b)) => b < self.order * self.scale as i64 && self.agree(),
            None => false,
        }
    }
}

/// Smallest scale putting every exponent in `binding` (and `base`) on the grid.
pub fn binding_scale(binding: &ParamBinding, base: u32) -> u32 {
    binding
        .values()
        .filter_map(|v| v.monomial())
        .fold(base as i64, |s, m| s.lcm(m.exp.denom())) as u32
}

fn qc(base: Exp, e: i64) -> QExpr {
    q(Poly::constant(base * e))
}

fn product(v: impl IntoIterator<Item = QExpr>) -> QExpr {
    let v: Vec<QExpr> = v.into_iter().collect();
    if v.is_empty() {
        c(1)
    } else {
        QExpr::Mul(v)
    }
}

/// `y` and `z`, either of which may be infinite.
struct Limits {
    y: Option<QExpr>,
    z: Option<QExpr>,
    base: Exp,
}

impl Limits {
    fn new(binding: &ParamBinding, base: Exp) -> Result<Limits, TransformError> {
        let get = |name: &str| match binding.get(name) {
            Some(ParamValue::Infinity) => Ok(None),
            Some(ParamValue::Value(_)) => Ok(Some(p(name))),
            None => Err(TransformError::Eval(EvalError::UnboundParam(name.into()))),
        };
        Ok(Limits { y: get("y")?, z: get("z")?, base })
    }

    fn finite(&self) -> Vec<QExpr> {
        self.y.iter().chain(&self.z).cloned().collect()
    }

    /// `(y, z; Q)_m (c/yz)^m` with the limits taken.
    fn block(&self, cc: QExpr, m: Poly) -> QExpr {
        let b = self.base;
        let tri = q((m * m - m) * (b * exp(1, 2)));
        match (&self.y, &self.z) {
            (Some(y), Some(z)) => poch(y.clone(), b, m) * poch(z.clone(), b, m) * (cc / (y.clone() * z.clone())).pow(m),
            (Some(v), None) | (None, Some(v)) => poch(v.clone(), b, m) * (cc / v.clone()).pow(m) * sign(m) * tri,
            (None, None) => cc.pow(m) * q((m * m - m) * b),
        }
    }

    /// `(c/y, c/z; Q)_m`
    fn over(&self, cc: &QExpr, m: Poly) -> QExpr {
        product(self.finite().into_iter().map(|v| poch(cc.clone() / v, self.base, m)))
    }

    /// `(c/y, c/z; Q)_inf`
    fn over_inf(&self, cc: &QExpr) -> QExpr {
        product(self.finite().into_iter().map(|v| poch_inf(cc.clone() / v, self.base)))
    }

    /// `(c/yz; Q)_inf`
    fn yz_inf(&self, cc: &QExpr) -> QExpr {
        match (&self.y, &self.z) {
            (Some(y), Some(z)) => poch_inf(cc.clone() / (y.clone() * z.clone()), self.base),
            _ => c(1),
        }
    }
}

fn upto(var: Var, n_max: Option<i64>, body: QExpr) -> QExpr {
    match n_max {
        Some(m) => sum_to(var, m, body),
        None => sum(var, body),
    }
}

fn finish(
    lhs: QExpr,
    rhs: QExpr,
    binding: ParamBinding,
    scale: u32,
    order: i64,
    degree: Option<Option<i64>>,
) -> Result<TransformSides, TransformError> {
    let (l, tl) = eval_to_order(&lhs, &binding, scale, order, SumPolicy::default())?;
    let (r, tr) = eval_to_order(&rhs, &binding, scale, order, SumPolicy::default())?;
    Ok(TransformSides {
        lhs_expr: lhs,
        rhs_expr: rhs,
        lhs: l,
        rhs: r,
        binding,
        scale,
        order,
        terms_used: tl.merge(tr),
        degree_bound: degree,
    })
}

fn closed_beta(pr: &PairSpec) -> Result<QExpr, TransformError> {
    pr.beta
        .clone()
        .ok_or_else(|| TransformError::Contract(format!("pair `{}` has no closed-form beta", pr.name)))
}

/// Bailey's lemma for the pair at `k = 0`, with parameters `y`, `z`:
///
/// ```text
/// sum (y, z)_n (aQ/yz)^n beta_n
///   = (aQ/y, aQ/z)_inf / (aQ, aQ/yz)_inf  sum (y, z)_n (aQ/yz)^n / (aQ/y, aQ/z)_n  alpha_n
/// ```
pub fn bailey_lemma_sides(
    pr: &PairSpec,
    binding: &ParamBinding,
    n_max: Option<i64>,
    order: i64,
) -> Result<TransformSides, TransformError> {
    let pr = if pr.kind == PairKind::Wp { bailey_reduction(pr)? } else { pr.clone() };
    let beta = closed_beta(&pr)?;
    let b = pr.base;
    let lim = Limits::new(binding, b)?;
    let aq = pr.a.clone() * qc(b, 1);
    let n = Poly::n();
    let lhs = upto(Var::N, n_max, lim.block(aq.clone(), n) * beta);
    let prefactor = lim.over_inf(&aq) / (poch_inf(aq.clone(), b) * lim.yz_inf(&aq));
    let rhs = prefactor * upto(Var::N, n_max, lim.block(aq.clone(), n) / lim.over(&aq, n) * pr.alpha.clone());
    let full = pr.bind(binding);
    let scale = binding_scale(&full, pr.scale);
    finish(lhs, rhs, full, scale, order, None)
}

/// The finite transformation with parameters `y`, `z` and a terminating
/// `Q^-N`:
///
/// ```text
/// sum_{n<=N} (1 - kQ^2n)/(1 - k) (y, z, kaQ^(N+1)/yz, Q^-N)_n
///            / (kQ/y, kQ/z, yzQ^-N/a, kQ^(N+1))_n  Q^n beta_n
///   = (Qk, Qk/yz, Qa/y, Qa/z)_N / (Qk/y, Qk/z, Qa, Qa/yz)_N
///     sum_{n<=N} (y, z, kaQ^(N+1)/yz, Q^-N)_n
///            / (aQ/y, aQ/z, aQ^(N+1), yzQ^-N/k)_n  (aQ/k)^n alpha_n
/// ```
///
/// Both sides are rational in `q`, so the series are computed through the
/// numerator degree bound of their difference, which makes agreement exact.
pub fn fbt1_sides(
    pr: &PairSpec,
    binding: &ParamBinding,
    big_n: i64,
    order: i64,
) -> Result<TransformSides, TransformError> {
    let (lhs, rhs, full, scale) = fbt1_expressions(pr, binding, big_n)?;
    let bound = degree_bound(&lhs, &rhs, &full, scale)?;
    let needed = bound.map_or(0, |d| (d + scale as i64).div_euclid(scale as i64));
    finish(lhs, rhs, full, scale, order.max(needed), Some(bound))
}

/// The two sides of [`fbt1_sides`] unevaluated, with the full binding and
/// the scale they need.
pub fn fbt1_expressions(
    pr: &PairSpec,
    binding: &ParamBinding,
    big_n: i64,
) -> Result<(QExpr, QExpr, ParamBinding, u32), TransformError> {
    if pr.kind != PairKind::Wp {
        return Err(TransformError::Contract(format!("`{}` is not a WP pair", pr.name)));
    }
    if big_n < 0 {
        return Err(TransformError::Contract(format!("N = {big_n} is negative")));
    }
    let lim = Limits::new(binding, pr.base)?;
    let (y, z) = match (&lim.y, &lim.z) {
        (Some(y), Some(z)) => (y.clone(), z.clone()),
        _ => return Err(TransformError::Contract("the finite transformation needs finite y and z".into())),
    };
    let beta = closed_beta(pr)?;
    let (b, a, k, n) = (pr.base, pr.a.clone(), p("k"), Poly::n());
    let yz = y.clone() * z.clone();
    let top = |m: Poly| {
        pochs(
            vec![y.clone(), z.clone(), k.clone() * a.clone() * qc(b, big_n + 1) / yz.clone(), qc(b, -big_n)],
            b,
            m,
        )
    };
    let lhs_den = pochs(
        vec![
            k.clone() * qc(b, 1) / y.clone(),
            k.clone() * qc(b, 1) / z.clone(),
            yz.clone() * qc(b, -big_n) / a.clone(),
            k.clone() * qc(b, big_n + 1),
        ],
        b,
        n,
    );
    let lhs = sum_to(Var::N, big_n, sqrt_pair(k.clone(), n * b) * top(n) / lhs_den * q(n * b) * beta);
    let pre_num = pochs(
        vec![
            k.clone() * qc(b, 1),
            k.clone() * qc(b, 1) / yz.clone(),
            a.clone() * qc(b, 1) / y.clone(),
            a.clone() * qc(b, 1) / z.clone(),
        ],
        b,
        big_n,
    );
    let pre_den = pochs(
        vec![
            k.clone() * qc(b, 1) / y.clone(),
            k.clone() * qc(b, 1) / z.clone(),
            a.clone() * qc(b, 1),
            a.clone() * qc(b, 1) / yz.clone(),
        ],
        b,
        big_n,
    );
    let rhs_den = pochs(
        vec![
            a.clone() * qc(b, 1) / y.clone(),
            a.clone() * qc(b, 1) / z.clone(),
            a.clone() * qc(b, big_n + 1),
            yz.clone() * qc(b, -big_n) / k.clone(),
        ],
        b,
        n,
    );
    let rhs = pre_num / pre_den
        * sum_to(
            Var::N,
            big_n,
            top(n) / rhs_den * (a.clone() * qc(b, 1) / k.clone()).pow(n) * pr.alpha.clone(),
        );
    let full = pr.bind(binding);
    let scale = binding_scale(&full, pr.scale);
    Ok((lhs, rhs, full, scale))
}

/// The WP-Bailey lemma with `y`, `z`, either of which may be infinite:
///
/// ```text
/// sum (1 - kQ^2n)/(1 - k) (y, z)_n / (kQ/y, kQ/z)_n (aQ/yz)^n beta_n
///   = (kQ, kQ/yz, aQ/y, aQ/z)_inf / (kQ/y, kQ/z, aQ, aQ/yz)_inf
///     sum (y, z)_n / (aQ/y, aQ/z)_n (aQ/yz)^n alpha_n
/// ```
pub fn wp_limit_sides(
    pr: &PairSpec,
    binding: &ParamBinding,
    n_max: Option<i64>,
    order: i64,
) -> Result<TransformSides, TransformError> {
    if pr.kind != PairKind::Wp {
        return Err(TransformError::Contract(format!("`{}` is not a WP pair", pr.name)));
    }
    let beta = closed_beta(pr)?;
    let b = pr.base;
    let lim = Limits::new(binding, b)?;
    let (n, k) = (Poly::n(), p("k"));
    let aq = pr.a.clone() * qc(b, 1);
    let kq = k.clone() * qc(b, 1);
    let lhs = upto(
        Var::N,
        n_max,
        sqrt_pair(k, n * b) * lim.block(aq.clone(), n) / lim.over(&kq, n) * beta,
    );
    let rhs = wp_prefactor(&lim, &aq, &kq)
        * upto(Var::N, n_max, lim.block(aq.clone(), n) / lim.over(&aq, n) * pr.alpha.clone());
    let full = pr.bind(binding);
    let scale = binding_scale(&full, pr.scale);
    finish(lhs, rhs, full, scale, order, None)
}

fn wp_prefactor(lim: &Limits, aq: &QExpr, kq: &QExpr) -> QExpr {
    let b = lim.base;
    poch_inf(kq.clone(), b) * lim.yz_inf(kq) * lim.over_inf(aq)
        / (lim.over_inf(kq) * poch_inf(aq.clone(), b) * lim.yz_inf(aq))
}

/// The WP-Bailey lemma with the beta of a pair written out through its
/// alpha, leaving a double sum in `n` and `j` (base `q`):
///
/// ```text
/// sum_{n,j} (1 - kq^2(n+j))/(1 - k) (k/a)_n (k)_{n+2j} (y, z)_{n+j}
///           / ((q)_n (aq)_{n+2j} (qk/y, qk/z)_{n+j}) (aq/yz)^(n+j) alpha_j
///   = (the right side of the WP-Bailey lemma)
/// ```
///
/// `alpha` is written in `n`.
pub fn double_sum_sides(
    alpha: &QExpr,
    a: &QExpr,
    binding: &ParamBinding,
    scale: u32,
    order: i64,
) -> Result<TransformSides, TransformError> {
    let one = Exp::from_integer(1);
    let lim = Limits::new(binding, one)?;
    let (n, j, k) = (Poly::n(), Poly::j(), p("k"));
    let aq = a.clone() * q(1);
    let kq = k.clone() * q(1);
    let alpha_j = Subst::var(Var::N, j).apply(alpha).map_err(|e| TransformError::Contract(e.to_string()))?;
    let body = sqrt_pair(k.clone(), n + j) * poch(k.clone() / a.clone(), 1, n) * poch(k.clone(), 1, n + j * 2)
        * lim.block(aq.clone(), n + j)
        / (poch(q(1), 1, n) * poch(aq.clone(), 1, n + j * 2) * lim.over(&kq, n + j))
        * alpha_j;
    let lhs = double_sum(body);
    let rhs = wp_prefactor(&lim, &aq, &kq) * sum(Var::N, lim.block(aq.clone(), n) / lim.over(&aq, n) * alpha.clone());
    let scale = binding_scale(binding, scale);
    finish(lhs, rhs, binding.clone(), scale, order, None)
}
