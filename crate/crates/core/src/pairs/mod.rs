//! Bailey and WP-Bailey pairs.
//!
//! A pair is a pair of closed-form sequences `alpha_n`, `beta_n` linked by the
//! WP transform
//!
//! ```text
//! beta_n = sum_{j=0}^{n} (k/a; Q)_{n-j} (k; Q)_{n+j} / ((Q; Q)_{n-j} (aQ; Q)_{n+j}) alpha_j
//! ```
//!
//! with base `Q = q^base`. Ordinary Bailey pairs are the case `k = 0`.

mod catalog;
mod construct;
mod multiparam;

use std::collections::BTreeSet;
use std::time::Instant;

use thiserror::Error;

use crate::expr::{
    c, eval_to_order, poch, q, singular_set, sum_to, Constraint, EvalContext, EvalError, ParamBinding, ParamValue,
    Poly, QExpr, Subst, SubstError, SumPolicy, Var,
};
use crate::par;
use crate::rational::{Exp, QRational};
use crate::report::{sample_strings, Mismatch, Status, TermsReport, VerificationReport};
use crate::sampling::{default_a_pool, default_k_pool, Sampler};
use crate::series::QSeries;

pub use catalog::{catalog, catalog_entries, CatalogEntry};
pub use construct::{
    bailey_reduction, classic_dual, combinator_linear, combinator_star, dual_wp, shift_pairs, unit_pair,
};
pub use multiparam::{multiparam_pair, Family, MultiparamSpec, SUPPORTED_TRIPLES};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    /// WP-Bailey pair in `a` and `k`.
    Wp,
    /// Ordinary Bailey pair (`k = 0`).
    Bailey,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairError {
    #[error("unknown pair `{0}`")]
    Unknown(String),
    #[error("unsupported parameters for `{name}`: {why}")]
    BadParams { name: String, why: String },
    #[error("{0}")]
    Contract(String),
    #[error(transparent)]
    Subst(#[from] SubstError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairSpec {
    pub name: String,
    pub kind: PairKind,
    /// `alpha_n` as an expression in `n`.
    pub alpha: QExpr,
    /// `beta_n`, or `None` when it is only defined by the transform.
    pub beta: Option<QExpr>,
    /// Value of `a` in the transform: the parameter `a` itself when free.
    pub a: QExpr,
    /// The transform runs in base `q^base`.
    pub base: Exp,
    pub scale: u32,
    /// Parameters held at fixed values for this pair, such as Singh's `c`, `d`.
    pub fixed: ParamBinding,
    pub constraints: Vec<Constraint>,
    pub description: String,
}

impl PairSpec {
    pub fn new(name: &str, kind: PairKind, alpha: QExpr, beta: Option<QExpr>, a: QExpr) -> Self {
        let mut p = PairSpec {
            name: name.to_string(),
            kind,
            alpha,
            beta,
            a,
            base: Exp::from_integer(1),
            scale: 1,
            fixed: ParamBinding::new(),
            constraints: Vec::new(),
            description: String::new(),
        };
        p.refresh_constraints();
        p
    }

    pub fn wp(name: &str, alpha: QExpr, beta: QExpr, a: QExpr) -> Self {
        Self::new(name, PairKind::Wp, alpha, Some(beta), a)
    }

    pub fn bailey(name: &str, alpha: QExpr, beta: QExpr, a: QExpr) -> Self {
        Self::new(name, PairKind::Bailey, alpha, Some(beta), a)
    }

    pub fn with_scale(mut self, scale: u32) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_base(mut self, base: impl Into<Exp>) -> Self {
        self.base = base.into();
        self.refresh_constraints();
        self
    }

    pub fn with_fixed(mut self, name: &str, v: impl Into<ParamValue>) -> Self {
        self.fixed.insert(name.to_string(), v.into());
        self.refresh_constraints();
        self
    }

    pub fn describe(mut self, text: &str) -> Self {
        self.description = text.to_string();
        self
    }

    pub fn require(mut self, c: Constraint) -> Self {
        if !self.constraints.contains(&c) {
            self.constraints.push(c);
            self.constraints.sort();
        }
        self
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    /// Recomputes the syntactic constraints on the sampled parameters.
    pub fn refresh_constraints(&mut self) {
        let mut all: BTreeSet<Constraint> = self.constraints.iter().cloned().collect();
        all.extend(singular_set(&self.alpha));
        if let Some(b) = &self.beta {
            all.extend(singular_set(b));
        }
        all.extend(singular_set(&self.kernel(Poly::n())));
        all.retain(|c| !self.fixed.contains_key(&c.param));
        self.constraints = all.into_iter().collect();
    }

    /// True when `a` is a sampled parameter rather than a fixed value.
    pub fn a_is_free(&self) -> bool {
        !self.a.params().iter().all(|p| self.fixed.contains_key(p))
    }

    /// True when `alpha` does not mention `k`.
    pub fn k_free(&self) -> bool {
        !self.alpha.params().contains("k")
    }

    /// Parameters a verification must bind, besides the fixed ones.
    pub fn free_params(&self) -> BTreeSet<String> {
        let mut all = self.alpha.params();
        all.extend(self.a.params());
        if let Some(b) = &self.beta {
            all.extend(b.params());
        }
        if self.kind == PairKind::Wp {
            all.insert("k".into());
        }
        all.retain(|p| !self.fixed.contains_key(p));
        all
    }

    fn base_q(&self, extra: impl Into<Poly>) -> QExpr {
        q(Poly::constant(self.base) + extra.into())
    }

    /// Transform kernel for fixed `n` (any polynomial) as an expression in `j`.
    pub fn kernel(&self, n: Poly) -> QExpr {
        let (b, a) = (self.base, self.a.clone());
        let j = Poly::j();
        let den = poch(self.base_q(0), b, n - j) * poch(a.clone() * self.base_q(0), b, n + j);
        match self.kind {
            PairKind::Bailey => c(1) / den,
            PairKind::Wp => {
                let k = QExpr::Param("k".into());
                poch(k.clone() / a, b, n - j) * poch(k, b, n + j) / den
            }
        }
    }

    fn at(e: &QExpr, n: i64) -> Result<QExpr, SubstError> {
        Subst::var(Var::N, Poly::constant(n)).apply(e)
    }

    pub fn alpha_at(&self, n: i64) -> Result<QExpr, SubstError> {
        Self::at(&self.alpha, n)
    }

    pub fn beta_at(&self, n: i64) -> Result<Option<QExpr>, SubstError> {
        self.beta.as_ref().map(|b| Self::at(b, n)).transpose()
    }

    /// The right side of the transform for fixed `n`, as a finite sum over `j`.
    pub fn transform_at(&self, n: i64) -> Result<QExpr, SubstError> {
        let alpha_j = Subst::var(Var::N, Poly::j()).apply(&self.alpha)?;
        Ok(sum_to(Var::J, n, self.kernel(Poly::constant(n)) * alpha_j))
    }

    /// `binding` with the pair's fixed parameters added.
    pub fn bind(&self, binding: &ParamBinding) -> ParamBinding {
        let mut b = self.fixed.clone();
        b.extend(binding.iter().map(|(k, v)| (k.clone(), v.clone())));
        b
    }

    fn eval(&self, e: &QExpr, binding: &ParamBinding, order: i64) -> Result<QSeries, EvalError> {
        eval_to_order(e, &self.bind(binding), self.scale, order, SumPolicy::default()).map(|r| r.0)
    }

    pub fn alpha_table(&self, binding: &ParamBinding, n_max: i64, order: i64) -> Result<Vec<QSeries>, EvalError> {
        (0..=n_max).map(|n| self.eval(&self.alpha_at(n).map_err(subst_err)?, binding, order)).collect()
    }

    pub fn beta_table(&self, binding: &ParamBinding, n_max: i64, order: i64) -> Result<Vec<QSeries>, EvalError> {
        (0..=n_max)
            .map(|n| {
                let b = self.beta_at(n).map_err(subst_err)?.ok_or_else(|| {
                    EvalError::Domain(format!("pair `{}` has no closed-form beta", self.name))
                })?;
                self.eval(&b, binding, order)
            })
            .collect()
    }
}

fn subst_err(e: SubstError) -> EvalError {
    EvalError::Domain(e.to_string())
}

/// `beta_0 ..= beta_{n_max}` computed from `alpha` by the transform.
///
/// `alpha_j` is evaluated once per `j`; each `beta_n` is then accumulated
/// Horner-style from `j = n` down, multiplying by the ratio of consecutive
/// kernel terms
///
/// ```text
/// K(n,j)/K(n,j-1) = (1 - k Q^(n+j-1)) (1 - Q^(n-j+1)) / ((1 - (k/a) Q^(n-j)) (1 - a Q^(n+j)))
/// ```
///
/// and finally by `K(n,0)`.
pub fn wp_transform(p: &PairSpec, binding: &ParamBinding, n_max: i64, order: i64) -> Result<Vec<QSeries>, EvalError> {
    let target = order * p.scale as i64;
    let mut work = order;
    for _ in 0..6 {
        let out = horner(p, binding, n_max, work)?;
        let reached = out.iter().map(QSeries::prec_t).min().unwrap_or(target);
        if reached >= target {
            return Ok(out.into_iter().map(|s| s.truncate_t(target)).collect());
        }
        work += (target - reached + p.scale as i64 - 1) / p.scale as i64;
    }
    Err(EvalError::PrecisionExhausted)
}

fn horner(p: &PairSpec, binding: &ParamBinding, n_max: i64, order: i64) -> Result<Vec<QSeries>, EvalError> {
    let alphas = p.alpha_table(binding, n_max, order)?;
    let full = p.bind(binding);
    let ctx = EvalContext::new(&full, p.scale, 0);
    let a = ctx.monomial(&p.a, None)?;
    let k = match p.kind {
        PairKind::Wp => Some(ctx.monomial(&QExpr::Param("k".into()), None)?),
        PairKind::Bailey => None,
    };
    let t = |e: Exp| ctx.t(e);
    let step = t(p.base)?;
    let a_t = t(a.exp)?;
    let singular = |_| EvalError::Singular("a transform denominator vanishes".into());
    let k_over_a = match &k {
        Some(k) => Some(k.div(&a).ok_or_else(|| EvalError::Singular("a = 0".into()))?),
        None => None,
    };
    let mut out = Vec::with_capacity(alphas.len());
    for n in 0..=n_max {
        let mut acc = alphas[n as usize].clone();
        for j in (1..=n).rev() {
            acc = acc.mul_binomial_t(&QRational::from_integer(1.into()), (n - j + 1) * step);
            acc = acc.div_binomial_t(&a.coeff, a_t + (n + j) * step).map_err(singular)?;
            if let (Some(k), Some(ka)) = (&k, &k_over_a) {
                acc = acc.mul_binomial_t(&k.coeff, t(k.exp)? + (n + j - 1) * step);
                acc = acc.div_binomial_t(&ka.coeff, t(ka.exp)? + (n - j) * step).map_err(singular)?;
            }
            acc = acc.add(&alphas[(j - 1) as usize])?;
        }
        for i in 0..n {
            acc = acc.div_binomial_t(&QRational::from_integer(1.into()), (i + 1) * step).map_err(singular)?;
            acc = acc.div_binomial_t(&a.coeff, a_t + (i + 1) * step).map_err(singular)?;
            if let (Some(k), Some(ka)) = (&k, &k_over_a) {
                acc = acc.mul_binomial_t(&k.coeff, t(k.exp)? + i * step);
                acc = acc.mul_binomial_t(&ka.coeff, t(ka.exp)? + i * step);
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// The transform evaluated term by term from [`PairSpec::transform_at`];
/// slower than [`wp_transform`], kept as an independent check of it.
pub fn wp_transform_direct(
    p: &PairSpec,
    binding: &ParamBinding,
    n_max: i64,
    order: i64,
) -> Result<Vec<QSeries>, EvalError> {
    (0..=n_max).map(|n| p.eval(&p.transform_at(n).map_err(subst_err)?, binding, order)).collect()
}

/// Samples and limits for [`verify_pair`].
#[derive(Debug, Clone)]
pub struct PairCheck {
    /// Candidate `k` values, tried in order.
    pub k_samples: Vec<QRational>,
    /// How many nonsingular `k` samples must pass.
    pub k_needed: usize,
    /// Candidate `a` values; ignored when the pair fixes `a`.
    pub a_samples: Vec<QRational>,
    pub a_needed: usize,
    pub n_max: i64,
    pub order: i64,
    pub jobs: Option<usize>,
}

impl PairCheck {
    /// Seeded samples avoiding the pair's constraints, with a few spares in
    /// case a sample turns out singular at run time.
    pub fn sampled(p: &PairSpec, k_needed: usize, a_needed: usize, n_max: i64, order: i64, seed: u64) -> Self {
        let mut s = Sampler::new(seed);
        let k_samples = s.draw("k", &default_k_pool(), k_needed + 4, &p.constraints);
        let a_samples = s.draw("a", &default_a_pool(), a_needed + 3, &p.constraints);
        PairCheck { k_samples, k_needed, a_samples, a_needed, n_max, order, jobs: None }
    }

    /// Enough `k` samples that agreement proves each coefficient identity,
    /// given both sides are rational in `k` of low degree.
    pub fn proving(p: &PairSpec, n_max: i64, order: i64, seed: u64) -> Self {
        Self::sampled(p, (2 * n_max + 3).max(21) as usize, 2, n_max, order, seed)
    }
}

enum SampleOutcome {
    Pass,
    Fail { n: i64, mismatch: Mismatch },
    Error(EvalError),
}

fn check_sample(p: &PairSpec, binding: &ParamBinding, n_max: i64, order: i64) -> SampleOutcome {
    let run = || -> Result<Option<(i64, Mismatch)>, EvalError> {
        let target = order * p.scale as i64;
        let transformed = wp_transform(p, binding, n_max, order)?;
        for (n, rhs) in (0..=n_max).zip(&transformed) {
            let beta = p.beta_at(n).map_err(subst_err)?.ok_or_else(|| {
                EvalError::Domain(format!("pair `{}` has no closed-form beta", p.name))
            })?;
            let lhs = p.eval(&beta, binding, order)?;
            if let Some(e) = lhs.first_difference_t(rhs, target) {
                return Ok(Some((n, Mismatch::at(e, &lhs, rhs))));
            }
        }
        Ok(None)
    };
    match run() {
        Ok(None) => SampleOutcome::Pass,
        Ok(Some((n, mismatch))) => SampleOutcome::Fail { n, mismatch },
        Err(e) => SampleOutcome::Error(e),
    }
}

/// Checks the closed-form `beta` against the transform of `alpha` for every
/// `n <= n_max`, exactly through `q^order`, over the sampled bindings.
pub fn verify_pair(p: &PairSpec, check: &PairCheck) -> Result<VerificationReport, PairError> {
    let start = Instant::now();
    let free = p.free_params();
    if let Some(other) = free.iter().find(|x| *x != "a" && *x != "k") {
        return Err(PairError::Contract(format!(
            "pair `{}` leaves parameter `{other}` unbound; fix it before verifying",
            p.name
        )));
    }
    if p.beta.is_none() {
        return Err(PairError::Contract(format!("pair `{}` has no closed-form beta to check", p.name)));
    }
    let a_values: Vec<Option<QRational>> = if free.contains("a") {
        check.a_samples.iter().cloned().map(Some).collect()
    } else {
        vec![None]
    };
    let k_values: Vec<Option<QRational>> = if free.contains("k") {
        check.k_samples.iter().cloned().map(Some).collect()
    } else {
        vec![None]
    };
    let binding = |a: &Option<QRational>, k: &Option<QRational>| {
        let mut b = ParamBinding::new();
        if let Some(a) = a {
            b.insert("a".into(), ParamValue::rational(a.clone()));
        }
        if let Some(k) = k {
            b.insert("k".into(), ParamValue::rational(k.clone()));
        }
        b
    };

    let k_needed = if free.contains("k") { check.k_needed } else { 1 };
    let a_needed = if free.contains("a") { check.a_needed } else { 1 };
    let mut samples = Vec::new();
    let mut status = Status::Pass;
    let mut first_mismatch = None;
    let mut detail = None;
    let mut skipped = 0;
    let mut first_error: Option<String> = None;
    let mut a_done = 0;
    // spares are only evaluated when earlier samples turn out singular
    'outer: for a in &a_values {
        if a_done == a_needed {
            break;
        }
        let mut passed = 0;
        let mut next = 0;
        let mut a_samples = Vec::new();
        while passed < k_needed && next < k_values.len() {
            let take = (k_needed - passed).min(k_values.len() - next);
            let batch: Vec<ParamBinding> = k_values[next..next + take].iter().map(|k| binding(a, k)).collect();
            next += take;
            let outcomes = par::map(&batch, check.jobs, |b| check_sample(p, b, check.n_max, check.order));
            for (b, o) in batch.iter().zip(outcomes) {
                match o {
                    SampleOutcome::Pass => {
                        passed += 1;
                        a_samples.push(sample_strings(&p.bind(b)));
                    }
                    SampleOutcome::Fail { n, mismatch } => {
                        status = Status::Fail;
                        first_mismatch = Some(mismatch);
                        detail = Some(format!("beta_{n} differs from the transform at {}", describe(b)));
                        samples.extend(a_samples);
                        samples.push(sample_strings(&p.bind(b)));
                        break 'outer;
                    }
                    SampleOutcome::Error(e) if e.is_nonconvergent() => {
                        status = Status::Nonconvergent;
                        detail = Some(format!("{e} at {}", describe(b)));
                        samples.push(sample_strings(&p.bind(b)));
                        break 'outer;
                    }
                    SampleOutcome::Error(e) => {
                        skipped += 1;
                        first_error.get_or_insert_with(|| e.to_string());
                    }
                }
            }
        }
        if passed == k_needed {
            samples.extend(a_samples);
            a_done += 1;
        }
    }
    if status == Status::Pass && a_done < a_needed {
        status = Status::Singular;
        let why = first_error.unwrap_or_else(|| "not enough samples".into());
        detail = Some(format!("too few nonsingular samples ({skipped} skipped): {why}"));
    } else if status == Status::Pass && skipped > 0 {
        detail = Some(format!("{skipped} singular samples replaced"));
    }
    Ok(VerificationReport {
        case_id: p.name.clone(),
        status,
        order: check.order,
        scale: p.scale,
        samples,
        first_mismatch,
        terms_used: TermsReport { n: check.n_max, j: Some(check.n_max) },
        runtime_ms: start.elapsed().as_millis() as u64,
        detail,
    })
}

fn describe(b: &ParamBinding) -> String {
    let parts: Vec<String> = b.iter().map(|(k, v)| format!("{k}={v}")).collect();
    if parts.is_empty() {
        "the fixed parameters".into()
    } else {
        parts.join(", ")
    }
}
