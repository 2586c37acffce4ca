//! Named pairs.

use super::multiparam::{multiparam_pair, Family, MultiparamSpec};
use super::{PairError, PairKind, PairSpec};
use crate::expr::{c, case0, p, poch, pq, q, sign, sqrt_pair, sum_to, Monomial, ParamValue, Poly, QExpr, Var};
use crate::rational::{exp, int};

fn n() -> Poly {
    Poly::n()
}

fn half(k: i64) -> Poly {
    Poly::constant(exp(k, 2))
}

fn k() -> QExpr {
    p("k")
}

fn a() -> QExpr {
    p("a")
}

/// `alpha_0 = beta_0 = 1` by convention.
fn wrap(e: QExpr) -> QExpr {
    case0(n(), c(1), e)
}

/// `(1 - x q^2n)/(1 - x) (x; q)_n` for `n >= 1`, in a form that stays finite at `x = 1`.
fn lead(x: QExpr) -> QExpr {
    (c(1) - x.clone() * q(n() * 2)) * pq(x * q(1), n() - 1)
}

fn wp(name: &str, alpha: QExpr, beta: QExpr, a: QExpr) -> PairSpec {
    PairSpec::wp(name, wrap(alpha), wrap(beta), a)
}

fn bailey(name: &str, alpha: QExpr, beta: QExpr, a: QExpr) -> PairSpec {
    PairSpec::bailey(name, wrap(alpha), wrap(beta), a)
}

fn e7() -> PairSpec {
    wp(
        "E7prime",
        sign(n()) * (q(-n()) - q(n() + 1)) / (c(1) - q(1)),
        sign(n()) * poch(k() * k(), 2, n()) / (q(n()) * poch(q(2), 2, n())),
        q(1),
    )
    .describe("WP lift of the Slater pair E7, a = q")
}

fn f3() -> PairSpec {
    wp(
        "F3prime",
        q(-n() * exp(1, 2)) + q(n() * exp(1, 2)),
        pq(k(), n()) * pq(k() * q(half(1)), n()) * q(-n() * exp(1, 2)) / (pq(q(half(1)), n()) * pq(q(1), n())),
        c(1),
    )
    .with_scale(2)
    .describe("WP lift of the Slater pair F3, a = 1, half-integer powers of q")
}

fn f4() -> PairSpec {
    wp(
        "F4prime",
        (q(-n() * exp(1, 2)) + q(n() * exp(1, 2) + half(1))) / (c(1) + q(half(1))),
        pq(k(), n()) * pq(k() * q(half(-1)), n()) * q(-n() * exp(1, 2)) / (pq(q(half(3)), n()) * pq(q(1), n())),
        q(1),
    )
    .with_scale(2)
    .describe("WP lift of the Slater pair F4, a = q")
}

fn h3() -> PairSpec {
    let nn = n() * n();
    wp(
        "H3prime",
        sign(n()) * q(-nn * exp(1, 2)) * (q(-n() * exp(3, 2)) + q(n() * exp(3, 2))),
        sign(n()) * (c(1) - k() * q(n()) + k() * q(n() * 2)) * pq(k(), n())
            / (q((nn + n() * 3) * exp(1, 2)) * pq(q(1), n())),
        c(1),
    )
    .describe("WP lift of the Slater pair H3, a = 1")
}

fn h4() -> PairSpec {
    let nn = n() * n();
    wp(
        "H4prime",
        sign(n()) * q(-nn * exp(1, 2)) * (q(-n() * exp(1, 2)) + q(n() * exp(1, 2))),
        sign(n()) * pq(k(), n()) / (q((nn + n()) * exp(1, 2)) * pq(q(1), n())),
        c(1),
    )
    .describe("WP lift of the Slater pair H4, a = 1")
}

fn h5() -> PairSpec {
    wp(
        "H5prime",
        q(-n()) - q(n()),
        pq(k(), n()) * pq(k(), n()) * (c(1) - c(2) * k() * q(n()) + k() * q(n() * 2))
            / ((c(1) - k()) * q(n()) * pq(q(1), n()) * pq(q(1), n())),
        c(1),
    )
    .describe("WP lift of the Slater pair H5, a = 1")
}

fn h6() -> PairSpec {
    wp("H6prime", c(0), pq(k(), n()) * pq(k(), n()) / (pq(q(1), n()) * pq(q(1), n())), c(1))
        .describe("WP lift of the Slater pair H6, a = 1, alpha vanishing past n = 0")
}

fn h7() -> PairSpec {
    wp(
        "H7prime",
        c(2) * sign(n()),
        sign(n()) * poch(k() * k(), 2, n()) / poch(q(2), 2, n()),
        c(1),
    )
    .describe("WP lift of the Slater pair H7, a = 1")
}

fn h8() -> PairSpec {
    wp(
        "H8prime",
        sign(n()) * (q(-n()) + q(n())),
        sign(n()) * poch(k() * k(), 2, n()) * (c(1) + k() * q(n() * 2))
            / ((c(1) + k()) * q(n()) * poch(q(2), 2, n())),
        c(1),
    )
    .describe("WP lift of the Slater pair H8, a = 1")
}

fn h12() -> PairSpec {
    wp(
        "H12prime",
        q(-n()) - q(n() + 1),
        pq(k(), n()) * pq(k(), n() - 1) * (c(1) - k() * q(n() - 1) - k() * q(n()) + k() * q(n() * 2))
            / (q(n()) * pq(q(1), n()) * pq(q(2), n())),
        q(1),
    )
    .describe("WP lift of the Slater pair H12, a = q")
}

fn h13() -> PairSpec {
    wp(
        "H13prime",
        c(0),
        pq(k(), n()) * pq(k() / q(1), n()) / (pq(q(1), n()) * pq(q(2), n())),
        q(1),
    )
    .describe("WP lift of the Slater pair H13, a = q, alpha vanishing past n = 0")
}

fn h17() -> PairSpec {
    let nn = n() * n();
    wp(
        "H17prime",
        sign(n()) * (c(1) + q(n())) * q((nn - n()) * exp(1, 2)),
        sign(n()) * pq(k(), n()) * q((nn - n()) * exp(1, 2)) * k().pow(n()) / pq(q(1), n()),
        c(1),
    )
    .describe("WP lift of the Slater pair H17, a = 1")
}

fn h3_dual() -> PairSpec {
    let nn = n() * n();
    wp(
        "H3primedual",
        sign(n()) * q(nn * exp(1, 2)) * (q(-n() * exp(3, 2)) + q(n() * exp(3, 2))),
        sign(n()) * (c(1) - q(n()) + k() * q(n() * 2)) * pq(k(), n()) * k().pow(n() - 1)
            * q((nn - n() * 3) * exp(1, 2))
            / pq(q(1), n()),
        c(1),
    )
    .describe("dual of the lift of H3 under a -> 1/a, k -> 1/k, q -> 1/q, a = 1")
}

/// Singh's pair, with `alpha` rewritten so that it stays finite at `k = 0`:
/// `(a^2 q/(k c d); q)_n (k/a)^n = (k c d q^-n / a^2; q)_n (-a/(c d))^n q^(n(n+1)/2)`.
fn singh(cv: ParamValue, dv: ParamValue) -> PairSpec {
    let (cc, dd) = (p("c"), p("d"));
    let alpha = lead(a())
        * pq(cc.clone(), n())
        * pq(dd.clone(), n())
        * pq(k() * cc.clone() * dd.clone() * q(-n()) / (a() * a()), n())
        * (-(a() / (cc.clone() * dd.clone()))).pow(n())
        * q((n() * n() + n()) * exp(1, 2))
        / (pq(q(1), n())
            * pq(a() * q(1) / cc.clone(), n())
            * pq(a() * q(1) / dd.clone(), n())
            * pq(k() * cc.clone() * dd.clone() / a(), n()));
    let beta = pq(k() * cc.clone() / a(), n())
        * pq(k() * dd.clone() / a(), n())
        * pq(k(), n())
        * pq(a() * q(1) / (cc.clone() * dd.clone()), n())
        / (pq(a() * q(1) / cc.clone(), n())
            * pq(a() * q(1) / dd.clone(), n())
            * pq(q(1), n())
            * pq(k() * cc * dd / a(), n()));
    let name = format!("singh({cv},{dv})");
    wp(&name, alpha, beta, a())
        .with_fixed("c", cv)
        .with_fixed("d", dv)
        .describe("Singh's WP pair in a, k with parameters c, d; lifts Slater's general pair")
}

fn slater(cv: ParamValue, dv: ParamValue) -> PairSpec {
    let (cc, dd) = (p("c"), p("d"));
    let alpha = lead(a())
        * pq(cc.clone(), n())
        * pq(dd.clone(), n())
        * (-(a() / (cc.clone() * dd.clone()))).pow(n())
        * q((n() * n() + n()) * exp(1, 2))
        / (pq(a() * q(1) / cc.clone(), n()) * pq(a() * q(1) / dd.clone(), n()) * pq(q(1), n()));
    let beta = pq(a() * q(1) / (cc.clone() * dd.clone()), n())
        / (pq(a() * q(1) / cc, n()) * pq(a() * q(1) / dd, n()) * pq(q(1), n()));
    let name = format!("wpS({cv},{dv})");
    bailey(&name, alpha, beta, a())
        .with_fixed("c", cv)
        .with_fixed("d", dv)
        .describe("Slater's general Bailey pair in a with parameters c, d")
}

fn singh_limit() -> PairSpec {
    wp(
        "singh-cinf-dq",
        (q(-n()) - a() * q(n())) / (c(1) - a()),
        pq(k() * q(1) / a(), n()) * pq(k(), n()) / ((c(1) - a()) * pq(a() * q(1), n() - 1) * pq(q(1), n()) * q(n())),
        a(),
    )
    .describe("limit of Singh's pair as c -> infinity with d = q")
}

fn s111() -> PairSpec {
    wp(
        "S111",
        sign(n()) * q((n() * n() - n()) * exp(1, 2)) * lead(a()) / pq(q(1), n()),
        sign(n()) * k().pow(n()) * q((n() * n() - n()) * exp(1, 2)) * pq(k(), n()) / (a().pow(n()) * pq(q(1), n())),
        a(),
    )
    .describe("standard multiparameter WP pair at (d,e,h) = (1,1,1), closed form")
}

fn e111() -> PairSpec {
    wp(
        "E111",
        sign(n()) * a().pow(-n()) * sqrt_pair(a(), n()) * poch(a() * a(), 2, n()) / poch(q(2), 2, n()),
        sign(n()) * a().pow(-n()) * poch(k() * k(), 2, n()) / poch(q(2), 2, n()),
        a(),
    )
    .describe("Euler multiparameter WP pair at (d,e,h) = (1,1,1), closed form")
}

fn js111() -> PairSpec {
    wp(
        "JS111",
        q(-n() * exp(1, 2)) * sqrt_pair(a(), n()) * pq(a(), n()) * pq(q(half(1)), n())
            / (pq(q(1), n()) * pq(a() * q(half(1)), n())),
        pq(k(), n()) * pq(k() * q(half(1)) / a(), n()) * q(-n() * exp(1, 2)) / (pq(q(1), n()) * pq(a() * q(half(1)), n())),
        a(),
    )
    .with_scale(2)
    .describe("Jackson-Slater multiparameter WP pair at (d,e,h) = (1,1,1), closed form")
}

fn s112() -> PairSpec {
    let j = Poly::j();
    let term = sign(j) * k().pow(j) * q((j * j - j) * exp(1, 2) + n() * j) * pq(k() / a(), n() - j)
        / (pq(q(1), j) * pq(q(1), n() - j));
    wp(
        "S112",
        sign(n()) * a().pow(n()) * q((n() * n() * 3 - n()) * exp(1, 2)) * sqrt_pair(a(), n()) * pq(a(), n())
            / pq(q(1), n()),
        pq(k(), n()) * sum_to(Var::J, n(), term),
        a(),
    )
    .describe("standard multiparameter WP pair at (d,e,h) = (1,1,2), beta as a terminating sum")
}

fn b1() -> PairSpec {
    bailey(
        "B1",
        sign(n()) * q(n() * n() * exp(3, 2) - n() * exp(1, 2)) * (c(1) + q(n())),
        c(1) / pq(q(1), n()),
        c(1),
    )
    .describe("Slater's Bailey pair B1, a = 1")
}

fn b2() -> PairSpec {
    bailey(
        "B2",
        sign(n()) * q(n() * n() * exp(3, 2)) * (q(-n() * exp(3, 2)) + q(n() * exp(3, 2))),
        q(n()) / pq(q(1), n()),
        c(1),
    )
    .describe("Slater's Bailey pair B2, a = 1")
}

fn h3_bailey() -> PairSpec {
    bailey(
        "H3",
        sign(n()) * q(-n() * n() * exp(1, 2)) * (q(-n() * exp(3, 2)) + q(n() * exp(3, 2))),
        sign(n()) / (q((n() * n() + n() * 3) * exp(1, 2)) * pq(q(1), n())),
        c(1),
    )
    .describe("Slater's Bailey pair H3, a = 1")
}

/// A catalog id with a one-line description and an example instance.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub params: &'static str,
    /// An instance id that builds, e.g. `SMBP(1,1,1)`.
    pub example: String,
    pub kind: PairKind,
    pub description: String,
}

const BASIC: &[&str] = &[
    "E7prime", "F3prime", "F4prime", "H3prime", "H4prime", "H5prime", "H6prime", "H7prime", "H8prime",
    "H12prime", "H13prime", "H17prime", "newwp", "H3primedual", "singh", "wpS", "singh-cinf-dq", "S111", "E111",
    "JS111", "S112", "SMBP", "EMBP", "JSMBP", "B1", "B2", "H3",
];

pub fn catalog_entries() -> Vec<CatalogEntry> {
    BASIC
        .iter()
        .map(|id| {
            let params = match *id {
                "singh" | "wpS" => "(c,d), default (2,3)",
                "SMBP" | "EMBP" | "JSMBP" => "(d,e,h), required",
                _ => "",
            };
            let example = match *id {
                "SMBP" | "EMBP" | "JSMBP" => format!("{id}(1,1,1)"),
                _ => id.to_string(),
            };
            let p = catalog(&example).expect("catalog entries build");
            CatalogEntry { id, params, example, kind: p.kind, description: p.description }
        })
        .collect()
}

fn split_args(id: &str) -> Result<(&str, Vec<&str>), PairError> {
    match id.split_once('(') {
        None => Ok((id, Vec::new())),
        Some((name, rest)) => {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| PairError::BadParams { name: name.into(), why: "missing `)`".into() })?;
            Ok((name, inner.split(',').map(str::trim).collect()))
        }
    }
}

fn value(name: &str, s: &str) -> Result<ParamValue, PairError> {
    s.parse::<Monomial>()
        .map(ParamValue::Value)
        .map_err(|why| PairError::BadParams { name: name.into(), why })
}

fn integer(name: &str, s: &str) -> Result<u32, PairError> {
    s.parse::<u32>()
        .ok()
        .filter(|v| *v >= 1)
        .ok_or_else(|| PairError::BadParams { name: name.into(), why: format!("`{s}` is not a positive integer") })
}

/// Looks up a pair by id. Parametrised families take positional arguments:
/// `singh(2,3)`, `wpS(2,q)`, `SMBP(1,1,2)`.
pub fn catalog(id: &str) -> Result<PairSpec, PairError> {
    let (name, args) = split_args(id.trim())?;
    let no_args = |p: PairSpec| {
        if args.is_empty() {
            Ok(p)
        } else {
            Err(PairError::BadParams { name: name.into(), why: "takes no parameters".into() })
        }
    };
    match name {
        "E7prime" => no_args(e7()),
        "F3prime" => no_args(f3()),
        "newwp" => no_args(f3().renamed("newwp")),
        "F4prime" => no_args(f4()),
        "H3prime" => no_args(h3()),
        "H4prime" => no_args(h4()),
        "H5prime" => no_args(h5()),
        "H6prime" => no_args(h6()),
        "H7prime" => no_args(h7()),
        "H8prime" => no_args(h8()),
        "H12prime" => no_args(h12()),
        "H13prime" => no_args(h13()),
        "H17prime" => no_args(h17()),
        "H3primedual" => no_args(h3_dual()),
        "singh-cinf-dq" => no_args(singh_limit()),
        "S111" => no_args(s111()),
        "E111" => no_args(e111()),
        "JS111" => no_args(js111()),
        "S112" => no_args(s112()),
        "B1" => no_args(b1()),
        "B2" => no_args(b2()),
        "H3" => no_args(h3_bailey()),
        "singh" | "wpAB" | "wpS" | "slater" => {
            let (cv, dv) = match args.as_slice() {
                [] => (ParamValue::rational(int(2)), ParamValue::rational(int(3))),
                [cs, ds] => (value(name, cs)?, value(name, ds)?),
                _ => return Err(PairError::BadParams { name: name.into(), why: "expects (c,d)".into() }),
            };
            Ok(if name == "singh" || name == "wpAB" { singh(cv, dv) } else { slater(cv, dv) })
        }
        "SMBP" | "EMBP" | "JSMBP" => {
            let family = match name {
                "SMBP" => Family::Standard,
                "EMBP" => Family::Euler,
                _ => Family::JacksonSlater,
            };
            match args.as_slice() {
                [d, e, h] => multiparam_pair(MultiparamSpec {
                    family,
                    d: integer(name, d)?,
                    e: integer(name, e)?,
                    h: integer(name, h)?,
                }),
                _ => Err(PairError::BadParams { name: name.into(), why: "expects (d,e,h)".into() }),
            }
        }
        _ => Err(PairError::Unknown(id.to_string())),
    }
}
