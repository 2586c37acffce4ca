//! Identity catalog and the coefficientwise verification engine.
//!
//! Each case is encoded exactly as displayed. A case whose literal reading is
//! wrong stays wrong here; it is listed in [`EXPECTED_FAIL`] and its report
//! carries the first mismatching coefficients.

mod cases;

use std::collections::BTreeSet;
use std::time::Instant;

use num_traits::Zero;

use crate::expr::{degree_bound, eval_to_order, singular_set, Constraint, EvalError, ParamBinding, ParamValue, QExpr, SumPolicy, TermsUsed};
use crate::par;
use crate::rational::QRational;
use crate::report::{sample_strings, Mismatch, Status, TermsReport, VerificationReport};
use crate::sampling::{default_a_pool, default_k_pool, Sampler};
use crate::series::QSeries;

pub use cases::identity_cases;

/// Cases whose literal encoding is known to disagree.
pub const EXPECTED_FAIL: &[&str] = &["q1/2pair"];

#[derive(Debug, Clone)]
pub struct IdentityCase {
    pub id: String,
    pub description: String,
    pub lhs: QExpr,
    pub rhs: QExpr,
    /// Parameters held at one value for every sample.
    pub fixed: ParamBinding,
    /// Explicit domain restrictions, on top of the syntactic singular set.
    pub constraints: Vec<Constraint>,
    pub default_order: Option<i64>,
    pub scale: u32,
    /// Id of the classical case this one reduces to at `k = 0`.
    pub classical: Option<String>,
}

impl IdentityCase {
    pub fn new(id: &str, description: &str, lhs: QExpr, rhs: QExpr) -> Self {
        IdentityCase {
            id: id.to_string(),
            description: description.to_string(),
            lhs,
            rhs,
            fixed: ParamBinding::new(),
            constraints: Vec::new(),
            default_order: None,
            scale: 1,
            classical: None,
        }
    }

    pub fn with_scale(mut self, scale: u32) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_fixed(mut self, name: &str, v: impl Into<ParamValue>) -> Self {
        self.fixed.insert(name.to_string(), v.into());
        self
    }

    pub fn require(mut self, c: Constraint) -> Self {
        self.constraints.push(c);
        self
    }

    pub fn with_order(mut self, order: i64) -> Self {
        self.default_order = Some(order);
        self
    }

    pub fn classical(mut self, id: &str) -> Self {
        self.classical = Some(id.to_string());
        self
    }

    /// 40, or 30 when the series runs in half-integer powers.
    pub fn order(&self) -> i64 {
        self.default_order.unwrap_or(if self.scale > 1 { 30 } else { 40 })
    }

    /// Parameters drawn per sample, sorted.
    pub fn sampled(&self) -> Vec<String> {
        let mut all: BTreeSet<String> = self.lhs.params();
        all.extend(self.rhs.params());
        all.into_iter().filter(|p| !self.fixed.contains_key(p)).collect()
    }

    /// Explicit constraints plus the syntactic singular set of both sides.
    pub fn domain(&self) -> Vec<Constraint> {
        let mut all: BTreeSet<Constraint> = self.constraints.iter().cloned().collect();
        all.extend(singular_set(&self.lhs));
        all.extend(singular_set(&self.rhs));
        all.into_iter().collect()
    }

    /// True when neither side contains an infinite product or unbounded sum.
    pub fn is_finite(&self) -> bool {
        let mut finite = true;
        let mut look = |e: &QExpr| {
            if matches!(e, QExpr::PochInf { .. } | QExpr::DoubleSum { .. } | QExpr::Sum { upper: None, .. }) {
                finite = false;
            }
        };
        self.lhs.walk(&mut look);
        self.rhs.walk(&mut look);
        finite
    }

    pub fn is_zero_identity(&self) -> bool {
        self.rhs.is_const(0)
    }

    pub fn expected_fail(&self) -> bool {
        EXPECTED_FAIL.contains(&self.id.as_str())
    }
}

pub fn find_case(id: &str) -> Option<IdentityCase> {
    identity_cases().into_iter().find(|c| c.id == id)
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Order in `q`; `None` takes the case default.
    pub order: Option<i64>,
    pub samples: usize,
    pub seed: u64,
    /// Degree-audit finite cases; otherwise draw `2 * order + 3` values of
    /// `k`, enough to pin every coefficient as a polynomial in `k` of degree
    /// at most `2 * order + 2`.
    pub prove: bool,
    pub jobs: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { order: None, samples: 2, seed: 0, prove: false, jobs: None }
    }
}

enum Outcome {
    Pass(TermsUsed),
    Fail(Mismatch, TermsUsed),
    Error(EvalError),
}

/// Both sides of `c` under `binding`, exact through `q^order`.
pub fn expand_sides(c: &IdentityCase, binding: &ParamBinding, order: i64) -> Result<(QSeries, QSeries, TermsUsed), EvalError> {
    let (l, tl) = eval_to_order(&c.lhs, binding, c.scale, order, SumPolicy::default())?;
    let (r, tr) = eval_to_order(&c.rhs, binding, c.scale, order, SumPolicy::default())?;
    Ok((l, r, tl.merge(tr)))
}

fn check(c: &IdentityCase, binding: &ParamBinding, order: i64, prove: bool) -> Outcome {
    let mut order = order;
    if prove && c.is_finite() {
        match degree_bound(&c.lhs, &c.rhs, binding, c.scale) {
            Ok(Some(b)) => order = order.max((b + c.scale as i64 - 1).div_euclid(c.scale as i64)),
            Ok(None) => {}
            Err(e) => {
                return Outcome::Error(match e {
                    crate::expr::ShapeError::Eval(e) => e,
                    other => EvalError::Domain(other.to_string()),
                })
            }
        }
    }
    match expand_sides(c, binding, order) {
        Ok((l, r, used)) => match l.first_difference_t(&r, order * c.scale as i64) {
            None => Outcome::Pass(used),
            Some(e) => Outcome::Fail(Mismatch::at(e, &l, &r), used),
        },
        Err(e) => Outcome::Error(e),
    }
}

/// Seeded sample bindings for the free parameters of `c`, preferred values
/// first. `k` draws from the `k` pool, everything else from the `a` pool.
pub fn sample_bindings(c: &IdentityCase, count: usize, seed: u64) -> Vec<ParamBinding> {
    let domain = c.domain();
    let mut sampler = Sampler::new(seed);
    let columns: Vec<(String, Vec<QRational>)> = c
        .sampled()
        .into_iter()
        .map(|p| {
            let pool = if p == "k" { default_k_pool() } else { default_a_pool() };
            let values = sampler.draw(&p, &pool, count, &domain);
            (p, values)
        })
        .collect();
    (0..count)
        .map(|i| {
            let mut b = c.fixed.clone();
            for (p, v) in &columns {
                b.insert(p.clone(), ParamValue::rational(v[i].clone()));
            }
            b
        })
        .collect()
}

const SPARES: usize = 6;

/// Expands both sides for each sample and compares every trusted coefficient.
pub fn verify_identity(c: &IdentityCase, opts: &VerifyOptions) -> VerificationReport {
    let start = Instant::now();
    let order = opts.order.unwrap_or_else(|| c.order());
    let free = c.sampled();
    let needed = if free.is_empty() {
        1
    } else if opts.prove && !c.is_finite() && free.iter().any(|p| p == "k") {
        (2 * order + 3) as usize
    } else {
        opts.samples.max(1)
    };
    let pool = if free.is_empty() { vec![c.fixed.clone()] } else { sample_bindings(c, needed + SPARES, opts.seed) };

    let mut samples = Vec::new();
    let mut status = Status::Pass;
    let mut first_mismatch = None;
    let mut detail = None;
    let mut used = TermsUsed::default();
    let mut skipped = 0;
    let mut first_error: Option<String> = None;
    let mut next = 0;
    // spares are only evaluated when earlier samples turn out singular
    'outer: while samples.len() < needed && next < pool.len() {
        let take = (needed - samples.len()).min(pool.len() - next);
        let batch = &pool[next..next + take];
        next += take;
        let outcomes = par::map(batch, opts.jobs, |b| check(c, b, order, opts.prove));
        for (b, o) in batch.iter().zip(outcomes) {
            match o {
                Outcome::Pass(t) => {
                    used = used.merge(t);
                    samples.push(sample_strings(b));
                }
                Outcome::Fail(m, t) => {
                    used = used.merge(t);
                    status = Status::Fail;
                    first_mismatch = Some(m);
                    samples.push(sample_strings(b));
                    break 'outer;
                }
                Outcome::Error(e) if e.is_nonconvergent() => {
                    status = Status::Nonconvergent;
                    detail = Some(e.to_string());
                    samples.push(sample_strings(b));
                    break 'outer;
                }
                Outcome::Error(e) => {
                    skipped += 1;
                    first_error.get_or_insert_with(|| e.to_string());
                }
            }
        }
    }
    if status == Status::Pass && samples.len() < needed {
        status = Status::Singular;
        let why = first_error.unwrap_or_else(|| "not enough samples".into());
        detail = Some(format!("too few nonsingular samples ({skipped} skipped): {why}"));
    } else if status == Status::Pass && skipped > 0 {
        detail = Some(format!("{skipped} singular samples replaced"));
    }
    if opts.prove && status == Status::Pass {
        let how = if c.is_finite() {
            "degree-audited at each sample"
        } else if free.iter().any(|p| p == "k") {
            "k-samples pin each coefficient as a polynomial in k"
        } else {
            "no free k; evidence only"
        };
        detail = Some(detail.map_or(how.to_string(), |d| format!("{d}; {how}")));
    }
    if status == Status::Fail && c.expected_fail() {
        detail = Some("expected failure: literal reading is a known typo".into());
    }
    VerificationReport {
        case_id: c.id.clone(),
        status,
        order,
        scale: c.scale,
        samples,
        first_mismatch,
        terms_used: TermsReport::from(used),
        runtime_ms: start.elapsed().as_millis() as u64,
        detail,
    }
}

/// Runs every case whose id matches `filter`, reports sorted by id.
pub fn run_suite(filter: &str, order: Option<i64>, seed: u64, jobs: Option<usize>) -> Result<Vec<VerificationReport>, glob::PatternError> {
    let pat = glob::Pattern::new(filter)?;
    let cases: Vec<IdentityCase> = identity_cases().into_iter().filter(|c| pat.matches(&c.id)).collect();
    // cases run in parallel; samples inside a case stay sequential
    let opts = VerifyOptions { order, seed, jobs: Some(1), ..VerifyOptions::default() };
    let mut reports = par::map(&cases, jobs, |c| verify_identity(c, &opts));
    reports.sort_by(|a, b| a.case_id.cmp(&b.case_id));
    Ok(reports)
}

/// Suite status with allow-listed failures counted as passing.
pub fn suite_status(reports: &[VerificationReport]) -> Status {
    let effective: Vec<VerificationReport> = reports
        .iter()
        .map(|r| {
            let mut r = r.clone();
            if r.status == Status::Fail && EXPECTED_FAIL.contains(&r.case_id.as_str()) {
                r.status = Status::Pass;
            }
            r
        })
        .collect();
    crate::report::aggregate(&effective)
}

/// The case's left side at `k = 0` against its classical counterpart, both
/// through `q^order`. `None` when the case has no counterpart.
pub fn k_zero_reduction(c: &IdentityCase, order: i64) -> Option<Result<Option<Mismatch>, EvalError>> {
    let classical = find_case(c.classical.as_deref()?)?;
    let mut b = c.fixed.clone();
    b.insert("k".into(), ParamValue::rational(QRational::zero()));
    Some((|| {
        let (l, _) = eval_to_order(&c.lhs, &b, c.scale, order, SumPolicy::default())?;
        let (r, _) = eval_to_order(&classical.rhs, &ParamBinding::new(), c.scale, order, SumPolicy::default())?;
        Ok(l.first_difference_t(&r, order * c.scale as i64).map(|e| Mismatch::at(e, &l, &r)))
    })())
}
