//! Constructing new pairs from old ones.

use super::{PairError, PairKind, PairSpec};
use crate::expr::{c, case0, p, poch, q, simplify, Poly, QExpr, Subst, Var};
use crate::rational::Exp;

fn n() -> Poly {
    Poly::n()
}

fn k() -> QExpr {
    p("k")
}

/// `q^(base * e)`
fn qb(base: Exp, e: Poly) -> QExpr {
    q(e * base)
}

/// `(k, k/a; Q)_n / ((aQ, Q; Q)_n)`, the beta of the pair whose alpha is
/// `1, 0, 0, ...`.
fn unit_beta(a: &QExpr, base: Exp, kind: PairKind) -> QExpr {
    let den = poch(a.clone() * qb(base, 1.into()), base, n()) * poch(qb(base, 1.into()), base, n());
    match kind {
        PairKind::Wp => poch(k(), base, n()) * poch(k() / a.clone(), base, n()) / den,
        PairKind::Bailey => c(1) / den,
    }
}

/// The pair with `alpha_n = 1` at `n = 0` and `0` afterwards.
pub fn unit_pair(a: QExpr, kind: PairKind) -> PairSpec {
    let beta = case0(n(), c(1), unit_beta(&a, Exp::from_integer(1), kind));
    PairSpec::new("unit", kind, case0(n(), c(1), c(0)), Some(beta), a)
        .describe("alpha is 1 at n = 0 and 0 afterwards")
}

fn at(e: &QExpr, s: Subst) -> Result<QExpr, PairError> {
    Ok(s.apply(e)?)
}

fn closed_beta(p: &PairSpec, what: &str) -> Result<QExpr, PairError> {
    p.beta.clone().ok_or_else(|| PairError::Contract(format!("{what} needs a closed-form beta for `{}`", p.name)))
}

/// From a WP pair whose `alpha` does not involve `k`:
///
/// ```text
/// alpha*_n = (a Q^n + Q^-n) alpha_n
/// beta*_n  = [(1 + a Q^2n) beta_n(a, k) - (1 - k)(1 - k/a) beta_{n-1}(a, kQ)] / Q^n
///            - a (k, k/a; Q)_n / (aQ, Q; Q)_n
/// ```
pub fn combinator_star(pr: &PairSpec) -> Result<PairSpec, PairError> {
    if pr.kind != PairKind::Wp {
        return Err(PairError::Contract(format!("`{}` is not a WP pair", pr.name)));
    }
    if !pr.k_free() {
        return Err(PairError::Contract(format!("alpha of `{}` depends on k", pr.name)));
    }
    let beta = closed_beta(pr, "the star construction")?;
    let (a, b) = (pr.a.clone(), pr.base);
    let alpha = case0(n(), c(1), (a.clone() * qb(b, n()) + qb(b, -n())) * pr.alpha.clone());
    let shifted = at(&beta, Subst::var(Var::N, n() - 1).and_param("k", k() * qb(b, 1.into())))?;
    let lowered = poch(k(), b, 1) * poch(k() / a.clone(), b, 1) * shifted;
    let main = ((c(1) + a.clone() * qb(b, n() * 2)) * beta - lowered) / qb(b, n());
    let beta = case0(n(), c(1), main - a.clone() * unit_beta(&a, b, PairKind::Wp));
    let mut out = PairSpec::wp(&format!("star({})", pr.name), simplify(&alpha), simplify(&beta), a)
        .with_base(b)
        .with_scale(pr.scale)
        .describe(&format!("star construction applied to {}", pr.name));
    out.fixed = pr.fixed.clone();
    out.refresh_constraints();
    Ok(out)
}

/// `c1 (alpha1, beta1) + c2 (alpha2, beta2)` corrected by
/// `(1 - c1 - c2)` times the unit pair. The weights may involve parameters.
pub fn combinator_linear(p1: &PairSpec, p2: &PairSpec, c1: QExpr, c2: QExpr) -> Result<PairSpec, PairError> {
    if p1.a != p2.a || p1.base != p2.base || p1.kind != p2.kind {
        return Err(PairError::Contract(format!(
            "`{}` and `{}` are not relative to the same a and base",
            p1.name, p2.name
        )));
    }
    let (b1, b2) = (closed_beta(p1, "a linear combination")?, closed_beta(p2, "a linear combination")?);
    let rest = c(1) - c1.clone() - c2.clone();
    let alpha = case0(n(), c(1), c1.clone() * p1.alpha.clone() + c2.clone() * p2.alpha.clone());
    let beta = case0(
        n(),
        c(1),
        c1.clone() * b1 + c2.clone() * b2 + rest * unit_beta(&p1.a, p1.base, p1.kind),
    );
    let mut out = PairSpec::new(
        &format!("linear({}, {}; {}, {})", p1.name, p2.name, c1, c2),
        p1.kind,
        simplify(&alpha),
        Some(simplify(&beta)),
        p1.a.clone(),
    )
    .with_base(p1.base)
    .with_scale(p1.scale.max(p2.scale))
    .describe(&format!("linear combination of {} and {}", p1.name, p2.name));
    out.fixed = p1.fixed.clone();
    out.fixed.extend(p2.fixed.clone());
    out.refresh_constraints();
    Ok(out)
}

/// The ordinary Bailey pair obtained by setting `k = 0`.
pub fn bailey_reduction(pr: &PairSpec) -> Result<PairSpec, PairError> {
    let s = Subst::param("k", c(0));
    let mut out = PairSpec::new(
        &format!("{}@k=0", pr.name),
        PairKind::Bailey,
        simplify(&at(&pr.alpha, s.clone())?),
        pr.beta.as_ref().map(|b| at(b, s.clone())).transpose()?.map(|b| simplify(&b)),
        pr.a.clone(),
    )
    .with_base(pr.base)
    .with_scale(pr.scale)
    .describe(&format!("{} at k = 0", pr.name));
    out.fixed = pr.fixed.clone();
    out.refresh_constraints();
    Ok(out)
}

/// From a Bailey pair relative to `a`, evaluated at `aq`, two Bailey pairs
/// relative to `a`:
///
/// ```text
/// alpha*_n = (1 - aq) [alpha_n(aq)/(1 - aq^(2n+1)) - a q^(2n-1) alpha_{n-1}(aq)/(1 - aq^(2n-1))]
/// beta*_n  = beta_n(aq)
/// alpha+_n = (1 - aq) [q^n alpha_n(aq)/(1 - aq^(2n+1)) - q^(n-1) alpha_{n-1}(aq)/(1 - aq^(2n-1))]
/// beta+_n  = q^n beta_n(aq)
/// ```
pub fn shift_pairs(pr: &PairSpec) -> Result<(PairSpec, PairSpec), PairError> {
    if pr.kind != PairKind::Bailey || pr.a != p("a") || pr.base != Exp::from_integer(1) {
        return Err(PairError::Contract(format!(
            "`{}` must be a Bailey pair in base q with a free parameter a",
            pr.name
        )));
    }
    let beta = closed_beta(pr, "the shift construction")?;
    let a = p("a");
    let up = Subst::param("a", a.clone() * q(1));
    let alpha_aq = at(&pr.alpha, up.clone())?;
    let alpha_aq_prev = at(&alpha_aq, Subst::var(Var::N, n() - 1))?;
    let beta_aq = at(&beta, up)?;
    let lead = poch(a.clone() * q(1), 1, 1);
    let top = poch(a.clone() * q(n() * 2 + 1), 1, 1);
    let bottom = poch(a.clone() * q(n() * 2 - 1), 1, 1);
    let star_alpha = lead.clone()
        * (alpha_aq.clone() / top.clone() - a.clone() * q(n() * 2 - 1) * alpha_aq_prev.clone() / bottom.clone());
    let dagger_alpha = lead * (q(n()) * alpha_aq / top - q(n() - 1) * alpha_aq_prev / bottom);
    let build = |tag: &str, alpha: QExpr, beta: QExpr| {
        let mut out = PairSpec::bailey(
            &format!("{tag}({})", pr.name),
            simplify(&case0(n(), c(1), alpha)),
            simplify(&case0(n(), c(1), beta)),
            a.clone(),
        )
        .with_scale(pr.scale)
        .describe(&format!("{tag} shift of {} from a to aq", pr.name));
        out.fixed = pr.fixed.clone();
        out.refresh_constraints();
        out
    };
    Ok((
        build("shift", star_alpha, beta_aq.clone()),
        build("shift-dagger", dagger_alpha, q(n()) * beta_aq),
    ))
}

/// Value of `a` for the dual pair: a free `a` stays free, a fixed `e(q)`
/// becomes `1/e(1/q)`.
fn dual_a(pr: &PairSpec) -> Result<QExpr, PairError> {
    if pr.a == p("a") {
        return Ok(pr.a.clone());
    }
    let inv = Subst { invert_q: true, ..Subst::default() }.and_param("a", c(1) / p("a"));
    Ok(simplify(&(c(1) / at(&pr.a, inv)?)))
}

/// WP dual: `alpha*(a,k,q) = alpha(1/a,1/k,1/q)` and
/// `beta*(a,k,q) = (k/(aQ))^(2n) beta(1/a,1/k,1/q)`.
pub fn dual_wp(pr: &PairSpec) -> Result<PairSpec, PairError> {
    if pr.kind != PairKind::Wp {
        return Err(PairError::Contract(format!("`{}` is not a WP pair", pr.name)));
    }
    let beta = closed_beta(pr, "the dual")?;
    let s = Subst { invert_q: true, ..Subst::default() }
        .and_param("a", c(1) / p("a"))
        .and_param("k", c(1) / k());
    let a = dual_a(pr)?;
    let factor = (k() / (a.clone() * qb(pr.base, 1.into()))).pow(n() * 2);
    let mut out = PairSpec::wp(&format!("dual({})", pr.name), at(&pr.alpha, s.clone())?, factor * at(&beta, s)?, a)
        .with_base(pr.base)
        .with_scale(pr.scale)
        .describe(&format!("WP dual of {}", pr.name));
    out.fixed = pr.fixed.clone();
    out.refresh_constraints();
    Ok(out)
}

/// Classical dual of a Bailey pair: `alpha*_n = a^n q^(n^2) alpha_n(1/a, 1/q)`,
/// `beta*_n = a^-n q^(-n^2-n) beta_n(1/a, 1/q)`.
pub fn classic_dual(pr: &PairSpec) -> Result<PairSpec, PairError> {
    if pr.kind != PairKind::Bailey || pr.base != Exp::from_integer(1) {
        return Err(PairError::Contract(format!("`{}` is not a Bailey pair in base q", pr.name)));
    }
    let beta = closed_beta(pr, "the dual")?;
    let s = Subst { invert_q: true, ..Subst::default() }.and_param("a", c(1) / p("a"));
    let a = dual_a(pr)?;
    let nn = n() * n();
    let alpha = a.clone().pow(n()) * q(nn) * at(&pr.alpha, s.clone())?;
    let beta = a.clone().pow(-n()) * q(-nn - n()) * at(&beta, s)?;
    let mut out = PairSpec::bailey(&format!("dual({})", pr.name), alpha, beta, a)
        .with_scale(pr.scale)
        .describe(&format!("classical dual of {}", pr.name));
    out.fixed = pr.fixed.clone();
    out.refresh_constraints();
    Ok(out)
}
