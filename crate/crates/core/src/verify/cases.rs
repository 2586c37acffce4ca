//! The identity catalog, each side encoded as displayed.

use super::IdentityCase;
use crate::expr::{c, double_sum, p, poch, poch_inf, pq, q, quad, sign, sqrt_pair, sum, sum_to, case0, Poly, QExpr, Var};
use crate::rational::{exp, int, Exp};
use crate::ParamValue;

fn n() -> Poly {
    Poly::n()
}

fn j() -> Poly {
    Poly::j()
}

fn k() -> QExpr {
    p("k")
}

fn qe(e: Exp) -> QExpr {
    q(Poly::constant(e))
}

fn half(a: i64) -> Poly {
    Poly::constant(exp(a, 2))
}

/// `(x; q^step)_inf` for several `x`, multiplied.
fn pinf(args: Vec<QExpr>, step: i64) -> QExpr {
    QExpr::Mul(args.into_iter().map(|a| poch_inf(a, step)).collect())
}

/// `(q^a, q^b, q^m; q^m)_inf`
fn theta(a: i64, b: i64, m: i64) -> QExpr {
    pinf(vec![q(a), q(b), q(m)], m)
}

fn case(id: &str, description: &str, lhs: QExpr, rhs: QExpr) -> IdentityCase {
    IdentityCase::new(id, description, lhs, rhs)
}

/// Terminating identities with `N = 3`, `y = 2`, `z = 7`.
fn terminating_binding(c: IdentityCase) -> IdentityCase {
    c.with_fixed("y", ParamValue::rational(int(2))).with_fixed("z", ParamValue::rational(int(7)))
}

const BIG_N: i64 = 3;

/// `(y, z, k q^(N+1)/yz, q^-N; q)_n`
fn terminating_top() -> QExpr {
    let (y, z) = (p("y"), p("z"));
    pq(y.clone(), n()) * pq(z.clone(), n()) * pq(k() * q(BIG_N + 1) / (y * z), n()) * pq(q(-BIG_N), n())
}

/// `(qk, qk/yz, q/y, q/z; q)_N / (qk/y, qk/z, q, q/yz; q)_N`
fn terminating_prefactor() -> QExpr {
    let (y, z) = (p("y"), p("z"));
    let yz = y.clone() * z.clone();
    pq(q(1) * k(), BIG_N) * pq(q(1) * k() / yz.clone(), BIG_N) * pq(q(1) / y.clone(), BIG_N) * pq(q(1) / z.clone(), BIG_N)
        / (pq(q(1) * k() / y, BIG_N) * pq(q(1) * k() / z, BIG_N) * pq(q(1), BIG_N) * pq(q(1) / yz, BIG_N))
}

fn q_half_pair() -> IdentityCase {
    let (y, z) = (p("y"), p("z"));
    let h = half(1);
    let lhs = sum_to(
        Var::N,
        BIG_N,
        pq(k(), n()) * sqrt_pair(k(), n()) * terminating_top() * pq(k() * q(h), n()) * q(n() * exp(1, 2))
            / (pq(k() * q(1) / y.clone(), n())
                * pq(k() * q(1) / z.clone(), n())
                * pq(q(h), n())
                * pq(k() * q(BIG_N + 1), n())
                * pq(y.clone() * z.clone() * q(-BIG_N), n())
                * pq(q(1), n())),
    );
    // the inner sum starts at n = 0 as printed
    let inner = sum_to(
        Var::N,
        BIG_N,
        (c(1) + q(n())) * terminating_top()
            / (pq(q(1) / y.clone(), n())
                * pq(q(1) / z.clone(), n())
                * pq(q(BIG_N + 1), n())
                * pq(y * z * q(-BIG_N) / k(), n()))
            * (q(h) / k()).pow(n()),
    );
    let rhs = terminating_prefactor() * (c(1) + inner);
    terminating_binding(case(
        "q1/2pair",
        "terminating 8phi7 from the half-integer pair, N = 3, y = 2, z = 7, inner sum from n = 0 as printed",
        lhs,
        rhs,
    ))
    .with_scale(2)
}

fn cor3eq1() -> IdentityCase {
    let (y, z) = (p("y"), p("z"));
    let lhs = sum_to(
        Var::N,
        BIG_N,
        sqrt_pair(k(), n()) * quad(k(), n()) * pq(k(), n()) * terminating_top() * (-k()).pow(n())
            * q((n() * n() - n()) * exp(1, 2))
            / (pq(k() * q(1) / y.clone(), n())
                * pq(k() * q(1) / z.clone(), n())
                * pq(y.clone() * z.clone() * q(-BIG_N), n())
                * pq(k() * q(BIG_N + 1), n())
                * pq(q(1), n())),
    );
    let inner = sum_to(
        Var::N,
        BIG_N,
        case0(
            n(),
            c(0),
            terminating_top()
                / (pq(q(1) / y.clone(), n())
                    * pq(q(1) / z.clone(), n())
                    * pq(y * z * q(-BIG_N) / k(), n())
                    * pq(q(BIG_N + 1), n()))
                * (c(-1) / k()).pow(n())
                * q((n() * n() - n()) * exp(1, 2))
                * (c(1) + q(n() * 3)),
        ),
    );
    terminating_binding(case(
        "cor3eq1",
        "terminating identity from the dual of the H3 lift, N = 3, y = 2, z = 7",
        lhs,
        terminating_prefactor() * (c(1) + inner),
    ))
}

/// `(q sqrt k, -q sqrt k, k, rho1 q, rho2 q; q)_n / (sqrt k, -sqrt k, rho1, rho2, q; q)_n`
fn h3_dual_head() -> QExpr {
    sqrt_pair(k(), n()) * quad(k(), n()) * pq(k(), n()) / pq(q(1), n())
}

fn cor3() -> Vec<IdentityCase> {
    vec![
        case(
            "cor3eq2",
            "y, z = sqrt q, -sqrt q in the dual-H3 family; prefactor (1+k)/q, stray comma read as (q^2 k^2; q^2)",
            sum(
                Var::N,
                h3_dual_head() * poch(q(1), 2, n()) * k().pow(n()) * q((n() * n() - n() * 3) * exp(1, 2))
                    / poch(k() * k() * q(1), 2, n()),
            ),
            (c(1) + k()) / q(1) * poch_inf(q(2) * k() * k(), 2) / poch_inf(q(1) * k() * k(), 2),
        ),
        case(
            "cor3eq3",
            "y, z to infinity in the dual-H3 family; the sum vanishes",
            sum(Var::N, h3_dual_head() * (-k()).pow(n()) * q((n() * n() - n()) * exp(3, 2))),
            c(0),
        ),
        case(
            "cor3eq4",
            "y = sqrt q, z to infinity in the dual-H3 family",
            sum(
                Var::N,
                h3_dual_head() * pq(q(half(1)), n()) * k().pow(n()) * q(n() * n() - n() * exp(3, 2))
                    / pq(k() * q(half(1)), n()),
            ),
            q(half(-1)) * poch_inf(k() * q(1), 1) / poch_inf(k() * q(half(1)), 1),
        )
        .with_scale(2),
    ]
}

fn half_pair_limits() -> Vec<IdentityCase> {
    vec![
        case(
            "q1/2pairpr",
            "N, y, z to infinity with q -> q^2 in the half-integer pair",
            sum(Var::N, sqrt_pair(k(), n() * 2) * pq(k(), n() * 2) * q(n() * n() * 2 - n()) / pq(q(1), n() * 2)),
            poch_inf(k() * q(2), 2) / poch_inf(q(1), 2),
        ),
        case(
            "q1/2pairpr2",
            "vanishing very-well-poised sum",
            sum(Var::N, sqrt_pair(k(), n()) * pq(k(), n()) * sign(n()) * q((n() * n() - n()) * exp(1, 2)) / pq(q(1), n())),
            c(0),
        ),
        case(
            "q1/2pairpr3",
            "half-integer pair with y = -sqrt q after q -> q^2",
            sum(
                Var::N,
                sqrt_pair(k(), n() * 2) * poch(-q(1), 2, n()) * pq(k(), n() * 2) * q(n() * n() - n())
                    / (poch(-(k() * q(1)), 2, n()) * pq(q(1), n() * 2)),
            ),
            pinf(vec![k() * q(2), c(-1)], 2) / pinf(vec![-(k() * q(1)), q(1)], 2),
        ),
    ]
}

fn classical() -> Vec<IdentityCase> {
    let a = p("a");
    let (b, cc, d) = (p("b"), p("c"), p("d"));
    let aq = a.clone() * q(1);
    let six = case(
        "6phi5eq",
        "Jackson's very-well-poised 6phi5 summation",
        sum(
            Var::N,
            sqrt_pair(a.clone(), n())
                * pq(a.clone(), n())
                * pq(b.clone(), n())
                * pq(cc.clone(), n())
                * pq(d.clone(), n())
                * (aq.clone() / (b.clone() * cc.clone() * d.clone())).pow(n())
                / (pq(q(1), n())
                    * pq(aq.clone() / b.clone(), n())
                    * pq(aq.clone() / cc.clone(), n())
                    * pq(aq.clone() / d.clone(), n())),
        ),
        pinf(
            vec![
                aq.clone(),
                aq.clone() / (b.clone() * cc.clone()),
                aq.clone() / (b.clone() * d.clone()),
                aq.clone() / (cc.clone() * d.clone()),
            ],
            1,
        ) / pinf(
            vec![aq.clone() / b.clone(), aq.clone() / cc.clone(), aq.clone() / d.clone(), aq.clone() / (b * cc * d)],
            1,
        ),
    );
    let x = p("x");
    let jtp = case(
        "JTP",
        "Jacobi triple product, bilateral sum folded to n >= 0",
        sum(Var::N, case0(n(), c(1), (x.clone().pow(n()) + x.clone().pow(-n())) * q(n() * n()))),
        pinf(vec![-(q(1) / x.clone()), -(q(1) * x), q(2)], 2),
    );
    let rr1 = case(
        "RR1",
        "first Rogers-Ramanujan identity",
        sum(Var::N, q(n() * n()) / pq(q(1), n())),
        c(1) / pinf(vec![q(1), q(4)], 5),
    );
    vec![six, jtp, rr1]
}

fn bailey_b1_double_sums() -> Vec<IdentityCase> {
    let kq_over_q = poch_inf(k() * q(1), 1) / poch_inf(q(1), 1);
    let head = |nj2: Poly| {
        sqrt_pair(k(), n() + j()) * pq(k(), n()) * pq(k(), nj2) / (pq(q(1), n()) * pq(q(1), nj2)) * sign(j())
    };
    let rs = |id: &str, s: Exp, r: Exp, scale: u32| {
        let (two_s, lo, hi) = (s * 2, s - r, s + r);
        let rhs = poch_inf(k() * q(1), 1) * poch_inf(qe(lo), two_s) * poch_inf(qe(hi), two_s) * poch_inf(qe(two_s), two_s)
            / poch_inf(q(1), 1)
            + kq_over_q.clone();
        case(
            id,
            &format!("double sum with alpha_n = q^((s-1)n^2 - nr)(-1)^n(1 + q^(2nr)) at (s, r) = ({s}, {r})"),
            double_sum(
                head(n() + j() * 2)
                    * (c(1) + q(j() * (r * 2)))
                    * q(j() * j() * s - j() * r + n() * j() * 2 + n() * n()),
            ),
            rhs,
        )
        .with_scale(scale)
    };
    let b1 = case(
        "B1/2pairpr3",
        "WP extension of the first Rogers-Ramanujan identity from the Bailey pair B1",
        double_sum(
            head(n() + j() * 2)
                * (c(1) + q(j()))
                * q((j() * j() * 5 - j()) * exp(1, 2) + n() * j() * 2 + n() * n()),
        ),
        poch_inf(k() * q(1), 1) / pinf(vec![q(1), q(4)], 5) + kq_over_q.clone(),
    );
    let (y, z, a) = (p("y"), p("z"), p("a"));
    let prefactor = pinf(
        vec![q(1) * k(), q(1) * k() / (y.clone() * z.clone()), q(1) * a.clone() / y.clone(), q(1) * a.clone() / z.clone()],
        1,
    ) / pinf(
        vec![q(1) * k() / y.clone(), q(1) * k() / z.clone(), q(1) * a.clone(), q(1) * a.clone() / (y.clone() * z.clone())],
        1,
    );
    let general = case(
        "wpeq4B1'",
        "double sum with the Rogers-Ramanujan alpha in general a, y, z",
        double_sum(
            sqrt_pair(k(), n() + j())
                * pq(k() / a.clone(), n())
                * pq(k(), n() + j() * 2)
                * pq(y.clone() * q(j()), n())
                * pq(z.clone() * q(j()), n())
                * pq(q(1) * a.clone() / y.clone(), j())
                * pq(q(1) * a.clone() / z.clone(), j())
                * (q(1) * a.clone() / (y.clone() * z.clone())).pow(n())
                * q(j() * j())
                / (pq(q(1), n())
                    * pq(a.clone() * q(1), n() + j() * 2)
                    * pq(q(1) * k() / y.clone(), n() + j())
                    * pq(q(1) * k() / z, n() + j())
                    * pq(q(1), j())),
        ),
        prefactor / pinf(vec![q(1), q(4)], 5),
    );
    vec![
        b1,
        rs("rseq(5/2,1/2)", exp(5, 2), exp(1, 2), 1),
        rs("rseq(3,1)", int_exp(3), int_exp(1), 1),
        rs("rseq(2,1/2)", int_exp(2), exp(1, 2), 2),
        general,
    ]
}

fn int_exp(n: i64) -> Exp {
    Exp::from_integer(n)
}

fn multiparam_singles() -> Vec<IdentityCase> {
    let kq = k() * q(1);
    vec![
        case(
            "S111WPWBL",
            "standard (1,1,1) pair, a = 1, y, z to infinity",
            sum(
                Var::N,
                sqrt_pair(k(), n()) * pq(k(), n()) / pq(q(1), n())
                    * sign(n())
                    * k().pow(n())
                    * q((n() * n() * 3 - n()) * exp(1, 2)),
            ),
            poch_inf(kq.clone(), 1),
        ),
        case(
            "S111WPTBL",
            "standard (1,1,1) pair, a = 1, y = -sqrt q, z to infinity, q -> q^2",
            sum(
                Var::N,
                sqrt_pair(k(), n() * 2) * poch(-q(1), 2, n()) * poch(k(), 2, n())
                    / (poch(-kq.clone(), 2, n()) * poch(q(2), 2, n()))
                    * sign(n())
                    * k().pow(n())
                    * q(n() * n() * 2 - n()),
            ),
            poch_inf(k() * q(2), 2) / poch_inf(-kq.clone(), 2),
        ),
        case(
            "S111WPSSBL",
            "standard (1,1,1) pair, a = 1, y = -q, z to infinity",
            sum(
                Var::N,
                sqrt_pair(k(), n()) * pq(c(-1), n()) * pq(k(), n()) / (pq(-kq.clone(), n()) * pq(q(1), n()))
                    * sign(n())
                    * k().pow(n())
                    * q(n() * n()),
            ),
            poch_inf(kq.clone(), 1) / poch_inf(-kq.clone(), 1),
        ),
        case(
            "E111WPWBL",
            "Euler (1,1,1) pair, a = 1, y, z to infinity",
            sum(
                Var::N,
                sqrt_pair(k(), n()) * poch(k() * k(), 2, n()) / poch(q(2), 2, n()) * sign(n()) * q(n() * n()),
            ),
            poch_inf(kq.clone(), 1) * poch_inf(q(1), 2),
        )
        .classical("slater3"),
        case(
            "E111WPTBL",
            "Euler (1,1,1) pair with y = -sqrt q, z to infinity, q -> q^2",
            sum(
                Var::N,
                sqrt_pair(k(), n() * 2) * poch(-q(1), 2, n()) * poch(k() * k(), 4, n())
                    / (poch(-kq.clone(), 2, n()) * poch(q(4), 4, n()))
                    * sign(n())
                    * q(n() * n()),
            ),
            poch_inf(k() * q(2), 2) * poch_inf(q(1), 1) / (poch_inf(-kq.clone(), 2) * poch_inf(q(4), 4)),
        ),
        case(
            "JS111WPWBL",
            "Jackson-Slater (1,1,1) pair, a = 1, y, z to infinity",
            sum(Var::N, sqrt_pair(k(), n() * 2) * pq(k(), n() * 2) / pq(q(1), n() * 2) * q(n() * n() * 2 - n())),
            poch_inf(k() * q(2), 2) / poch_inf(q(1), 2),
        )
        .classical("slater9"),
        case(
            "JS111WPTBL",
            "Jackson-Slater (1,1,1) pair with y = -sqrt q, z to infinity",
            sum(
                Var::N,
                sqrt_pair(k(), n() * 2) * poch(-q(1), 2, n()) * pq(k(), n() * 2)
                    / (poch(-kq.clone(), 2, n()) * pq(q(1), n() * 2))
                    * q(n() * n() - n()),
            ),
            pinf(vec![k() * q(2), c(-1)], 2) / pinf(vec![-kq, q(1)], 2),
        ),
    ]
}

fn multiparam_double_sums() -> Vec<IdentityCase> {
    let crr = case(
        "crr",
        "WP generalization of the first Rogers-Ramanujan identity from the (1,1,2) pair",
        double_sum(
            sqrt_pair(k(), n() + j())
                * q(n() * n() + n() * j() * 3 + (j() * j() * 5 - j()) * exp(1, 2))
                * sign(j())
                * k().pow(j())
                * pq(k(), n())
                * pq(k(), n() + j())
                / (pq(q(1), j()) * pq(q(1), n())),
        ),
        poch_inf(k() * q(1), 1) / pinf(vec![q(1), q(4)], 5),
    )
    .classical("RR1");
    let gg = case(
        "WPGG",
        "WP generalization of the first Gollnitz-Gordon identity",
        double_sum(
            (-k()).pow(j())
                * sqrt_pair(k(), (n() + j()) * 2)
                * q((n() + j() * 2) * (n() + j() * 2) - j())
                * poch(-q(1), 2, n() + j())
                * poch(k(), 2, n())
                * poch(k(), 2, n() + j())
                / (poch(-(k() * q(1)), 2, n() + j()) * poch(q(2), 2, j()) * poch(q(2), 2, n())),
        ),
        poch_inf(k() * q(2), 2) / (poch_inf(-(k() * q(1)), 2) * pinf(vec![q(1), q(4), q(7)], 8)),
    )
    .classical("slater36");
    let mod7 = case(
        "mod7",
        "WP generalization of the first Rogers-Selberg mod 7 identity",
        double_sum(
            sqrt_pair(k(), (n() + j()) * 2) * poch(k(), 2, n() + j() * 2)
                / (poch(q(2), 2, j()) * poch(-q(1), 1, j() * 2) * poch(q(2), 2, n()))
                * sign(n())
                * k().pow(n())
                * q(n() * (n() * 3 - 1) + n() * j() * 4 + j() * j() * 2),
        ),
        poch_inf(k() * q(2), 2) * theta(3, 4, 7) / poch_inf(q(2), 2),
    )
    .classical("slater33");
    let mod8 = case(
        "mod8",
        "WP generalization of the Jackson-Slater identity",
        double_sum(
            sqrt_pair(k(), (n() + j()) * 2)
                * poch(k(), 2, n() + j() * 2)
                * poch(k() * q(1), 2, n() + j())
                * poch(q(1), 2, j())
                / (poch(q(2), 2, j()) * poch(q(1), 2, n() + j()) * poch(k() * q(1), 2, j()) * poch(q(2), 2, n()))
                * sign(j())
                * q(n() * n() * 2 - n() + n() * j() * 2 + j() * j()),
        ),
        poch_inf(k() * q(2), 2) * pinf(vec![-q(3), -q(5), q(8)], 8) / poch_inf(q(2), 2),
    )
    .classical("slater39");
    let mod9 = case(
        "mod9",
        "WP generalization of Bailey's mod 9 identity",
        double_sum(
            sqrt_pair(k(), (n() + j()) * 3) * poch(k(), 3, n() + j() * 2) * pq(q(1), j() * 3)
                / (poch(q(3), 3, n()) * poch(q(3), 3, j() * 2) * poch(q(3), 3, j()))
                * sign(n())
                * k().pow(n())
                * q((n() * n() * 9 - n() * 3) * exp(1, 2) + n() * j() * 6 + j() * j() * 3),
        ),
        poch_inf(k() * q(3), 3) * theta(4, 5, 9) / poch_inf(q(3), 3),
    )
    .classical("slater42");
    let mod14 = case(
        "mod14",
        "WP generalization of Rogers's mod 14 identity",
        double_sum(
            sqrt_pair(k(), n() + j()) * pq(k(), n() + j() * 2) / (poch(q(1), 2, j()) * pq(q(1), j()) * pq(q(1), n()))
                * sign(n())
                * k().pow(n())
                * q((n() * n() * 3 - n()) * exp(1, 2) + n() * j() * 2 + j() * j()),
        ),
        poch_inf(k() * q(1), 1) * theta(6, 8, 14) / poch_inf(q(1), 1),
    )
    .classical("slater61");
    vec![crr, gg, mod7, mod8, mod9, mod14]
}

/// Classical single-sum identities recovered at `k = 0`.
fn slater() -> Vec<IdentityCase> {
    vec![
        case(
            "slater3",
            "Euler: sum (-1)^n q^(n^2) / (q^2; q^2)_n",
            sum(Var::N, sign(n()) * q(n() * n()) / poch(q(2), 2, n())),
            poch_inf(q(1), 2),
        ),
        case(
            "slater9",
            "sum q^(2n^2-n) / (q; q)_2n",
            sum(Var::N, q(n() * n() * 2 - n()) / pq(q(1), n() * 2)),
            c(1) / poch_inf(q(1), 2),
        ),
        case(
            "slater33",
            "Rogers-Selberg mod 7",
            sum(Var::N, q(n() * n() * 2) / (poch(q(2), 2, n()) * pq(-q(1), n() * 2))),
            theta(3, 4, 7) / poch_inf(q(2), 2),
        ),
        case(
            "slater36",
            "first Gollnitz-Gordon identity",
            sum(Var::N, q(n() * n()) * poch(-q(1), 2, n()) / poch(q(2), 2, n())),
            c(1) / pinf(vec![q(1), q(4), q(7)], 8),
        ),
        case(
            "slater39",
            "Jackson-Slater identity",
            sum(Var::N, q(n() * n() * 2) / pq(q(1), n() * 2)),
            pinf(vec![-q(3), -q(5), q(8)], 8) / poch_inf(q(2), 2),
        ),
        case(
            "slater42",
            "Bailey's mod 9 identity",
            sum(Var::N, pq(q(1), n() * 3) * q(n() * n() * 3) / (poch(q(3), 3, n()) * poch(q(3), 3, n() * 2))),
            theta(4, 5, 9) / poch_inf(q(3), 3),
        ),
        case(
            "slater61",
            "Rogers's mod 14 identity",
            sum(Var::N, q(n() * n()) / (poch(q(1), 2, n()) * pq(q(1), n()))),
            theta(6, 8, 14) / poch_inf(q(1), 1),
        ),
    ]
}

/// Every catalog case, sorted by id.
pub fn identity_cases() -> Vec<IdentityCase> {
    let mut all = vec![q_half_pair(), cor3eq1()];
    all.extend(half_pair_limits());
    all.extend(cor3());
    all.extend(classical());
    all.extend(bailey_b1_double_sums());
    all.extend(multiparam_singles());
    all.extend(multiparam_double_sums());
    all.extend(slater());
    all.sort_by(|a, b| a.id.cmp(&b.id));
    all
}
