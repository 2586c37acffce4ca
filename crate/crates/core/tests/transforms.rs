use wpbailey::expr::{c, case0, eval_to_order, p, pq, q, sign, SumPolicy};
use wpbailey::pairs::{bailey_reduction, catalog, catalog_entries, unit_pair, PairKind};
use wpbailey::rational::{exp, int, rat};
use wpbailey::transforms::{
    bailey_lemma_sides, double_sum_sides, fbt1_expressions, fbt1_sides, wp_limit_sides, TransformSides,
};
use wpbailey::{Monomial, ParamBinding, ParamValue, Poly, QRational, QSeries};

fn bind(pairs: &[(&str, QRational)]) -> ParamBinding {
    pairs.iter().map(|(k, v)| (k.to_string(), ParamValue::rational(v.clone()))).collect()
}

fn with_inf(mut b: ParamBinding, names: &[&str]) -> ParamBinding {
    for n in names {
        b.insert(n.to_string(), ParamValue::Infinity);
    }
    b
}

/// `prod_{i>=0} (1 - c t^(m + i*step))^(+-1)` through `t^prec`, built from
/// series operations alone.
fn inf_product(s: QSeries, c: &QRational, m: i64, step: i64, invert: bool) -> QSeries {
    let prec = s.prec_t();
    let mut s = s;
    let mut e = m;
    while e <= prec {
        s = if invert { s.div_binomial_t(c, e).unwrap() } else { s.mul_binomial_t(c, e) };
        e += step;
    }
    s
}

fn one(scale: u32, prec: i64) -> QSeries {
    QSeries::one_t(scale, prec)
}

fn agrees(s: &TransformSides) -> bool {
    if let Some(m) = s.first_mismatch() {
        eprintln!("mismatch at q^{}: {} vs {}", m.exponent, m.lhs, m.rhs);
        return false;
    }
    true
}

fn same(a: &QSeries, b: &QSeries, prec: i64) -> bool {
    a.first_difference_t(b, prec).is_none()
}

#[test]
fn unit_pair_gives_q_gauss() {
    let pr = unit_pair(c(1), PairKind::Bailey);
    let b = bind(&[("y", int(2)), ("z", int(3))]);
    let s = bailey_lemma_sides(&pr, &b, None, 30).unwrap();
    assert!(agrees(&s));
    // (q/2, q/3)_inf / (q, q/6)_inf
    let mut want = one(1, 30);
    want = inf_product(want, &rat(1, 2), 1, 1, false);
    want = inf_product(want, &rat(1, 3), 1, 1, false);
    want = inf_product(want, &int(1), 1, 1, true);
    want = inf_product(want, &rat(1, 6), 1, 1, true);
    assert!(same(&s.rhs, &want, 30));
    assert!(s.terms_used.n > 0);
}

#[test]
fn b1_with_infinite_y_z_gives_rogers_ramanujan() {
    let pr = catalog("B1").unwrap();
    let b = with_inf(ParamBinding::new(), &["y", "z"]);
    let s = bailey_lemma_sides(&pr, &b, None, 30).unwrap();
    assert!(agrees(&s));
    let mut want = one(1, 30);
    want = inf_product(want, &int(1), 1, 5, true);
    want = inf_product(want, &int(1), 4, 5, true);
    assert!(same(&s.lhs, &want, 30));
}

#[test]
fn one_infinite_parameter_matches_large_finite_limit_shape() {
    // z -> infinity with y finite, checked against the same lemma for the
    // unit pair: sum (y)_n (-aq/y)^n q^(n(n-1)/2) / ((q)_n (aq)_n) = (aq/y)_inf / (aq)_inf
    let pr = unit_pair(c(1), PairKind::Bailey);
    let b = with_inf(bind(&[("y", int(3))]), &["z"]);
    let s = bailey_lemma_sides(&pr, &b, None, 25).unwrap();
    assert!(agrees(&s));
    let want = inf_product(inf_product(one(1, 25), &rat(1, 3), 1, 1, false), &int(1), 1, 1, true);
    assert!(same(&s.lhs, &want, 25));
}

#[test]
fn bailey_lemma_bounded_sums_record_terms() {
    let pr = catalog("B1").unwrap();
    let b = bind(&[("y", int(2)), ("z", int(3))]);
    let s = bailey_lemma_sides(&pr, &b, Some(6), 10).unwrap();
    assert_eq!(s.terms_used.n, 6);
}

#[test]
fn fbt1_at_n_zero_is_one_equals_one() {
    for id in ["newwp", "H3primedual", "wpAB"] {
        let pr = catalog(id).unwrap();
        let b = bind(&[("a", rat(2, 3)), ("k", rat(1, 5)), ("y", int(2)), ("z", int(7))]);
        let s = fbt1_sides(&pr, &b, 0, 10).unwrap();
        assert!(s.proved(), "{id}");
        assert!(same(&s.lhs, &one(s.scale, 10 * s.scale as i64), 10 * s.scale as i64), "{id}");
    }
}

#[test]
fn fbt1_newwp_matches_terminating_8phi7() {
    let pr = catalog("newwp").unwrap();
    let b = bind(&[("k", rat(1, 5)), ("y", int(2)), ("z", int(7))]);
    let s = fbt1_sides(&pr, &b, 3, 10).unwrap();
    assert_eq!(s.scale, 2);
    assert!(s.proved());

    // The terminating very-well-poised sum with a = 1, written out directly;
    // the right side starts its inner sum at n = 1.
    let (k, y, z) = (p("k"), p("y"), p("z"));
    let n = Poly::n();
    let big = 3;
    let h = exp(1, 2);
    let shared = pq(y.clone(), n) * pq(z.clone(), n) * pq(k.clone() * q(big + 1) / (y.clone() * z.clone()), n) * pq(q(-big), n);
    let lhs = wpbailey::expr::sum_to(
        wpbailey::Var::N,
        big,
        pq(k.clone(), n)
            * wpbailey::expr::sqrt_pair(k.clone(), n)
            * shared.clone()
            * pq(k.clone() * q(Poly::constant(h)), n)
            * q(n * h)
            / (pq(k.clone() * q(1) / y.clone(), n)
                * pq(k.clone() * q(1) / z.clone(), n)
                * pq(q(Poly::constant(h)), n)
                * pq(k.clone() * q(big + 1), n)
                * pq(y.clone() * z.clone() * q(-big), n)
                * pq(q(1), n)),
    );
    let pre = pq(q(1) * k.clone(), big) * pq(q(1) * k.clone() / (y.clone() * z.clone()), big)
        * pq(q(1) / y.clone(), big)
        * pq(q(1) / z.clone(), big)
        / (pq(q(1) * k.clone() / y.clone(), big)
            * pq(q(1) * k.clone() / z.clone(), big)
            * pq(q(1), big)
            * pq(q(1) / (y.clone() * z.clone()), big));
    let inner = wpbailey::expr::sum_to(
        wpbailey::Var::N,
        big,
        case0(
            n,
            c(0),
            (c(1) + q(n)) * shared
                / (pq(q(1) / y.clone(), n)
                    * pq(q(1) / z.clone(), n)
                    * pq(q(big + 1), n)
                    * pq(y.clone() * z.clone() * q(-big) / k.clone(), n))
                * (q(Poly::constant(h)) / k.clone()).pow(n),
        ),
    );
    let rhs = pre * (c(1) + inner);
    let order = s.order;
    let l = eval_to_order(&lhs, &s.binding, 2, order, SumPolicy::default()).unwrap().0;
    let r = eval_to_order(&rhs, &s.binding, 2, order, SumPolicy::default()).unwrap().0;
    let prec = order * 2;
    assert!(same(&l, &s.lhs, prec));
    assert!(same(&r, &s.rhs, prec));
}

#[test]
fn fbt1_h3_dual_at_n3() {
    let pr = catalog("H3primedual").unwrap();
    let b = bind(&[("k", rat(1, 3)), ("y", int(2)), ("z", int(7))]);
    let s = fbt1_sides(&pr, &b, 3, 10).unwrap();
    assert!(s.proved());
    assert!(matches!(s.degree_bound, Some(Some(_))));
}

#[test]
fn fbt1_rejects_infinite_parameters_and_bailey_pairs() {
    let b = with_inf(bind(&[("k", rat(1, 3)), ("y", int(2))]), &["z"]);
    assert!(fbt1_sides(&catalog("newwp").unwrap(), &b, 2, 10).is_err());
    let b = bind(&[("k", rat(1, 3)), ("y", int(2)), ("z", int(3))]);
    assert!(fbt1_sides(&catalog("B1").unwrap(), &b, 2, 10).is_err());
}

#[test]
fn fbt1_holds_for_every_catalog_wp_pair() {
    let bindings = [
        bind(&[("a", rat(2, 3)), ("k", rat(1, 5)), ("y", int(2)), ("z", int(7))]),
        bind(&[("a", rat(-3, 7)), ("k", rat(2, 5)), ("y", rat(3, 2)), ("z", int(-4))]),
    ];
    for e in catalog_entries() {
        let pr = catalog(&e.example).unwrap();
        if pr.kind != PairKind::Wp {
            continue;
        }
        for (i, b) in bindings.iter().enumerate() {
            let big = 1 + i as i64 * 2;
            let s = fbt1_sides(&pr, b, big, 5).unwrap_or_else(|err| panic!("{}: {err}", e.id));
            assert!(s.proved(), "{} at N = {big}", e.id);
        }
    }
}

#[test]
fn fbt1_tends_to_the_wp_lemma() {
    let pr = catalog("wpAB").unwrap();
    let b = bind(&[("a", rat(2, 3)), ("k", rat(1, 5)), ("y", int(2)), ("z", int(3))]);
    let (lhs, rhs, full, scale) = fbt1_expressions(&pr, &b, 40).unwrap();
    let lim = wp_limit_sides(&pr, &b, None, 15).unwrap();
    let l = eval_to_order(&lhs, &full, scale, 15, SumPolicy::default()).unwrap().0;
    let r = eval_to_order(&rhs, &full, scale, 15, SumPolicy::default()).unwrap().0;
    assert!(same(&l, &lim.lhs, 15));
    assert!(same(&r, &lim.rhs, 15));
    assert!(agrees(&lim));
}

#[test]
fn wp_limit_for_singh_pair() {
    let pr = catalog("wpAB").unwrap();
    let b = bind(&[("a", int(1)), ("k", rat(1, 5)), ("y", int(2)), ("z", int(3))]);
    let s = wp_limit_sides(&pr, &b, None, 25).unwrap();
    assert!(agrees(&s));
    assert!(!s.lhs.is_zero());
}

#[test]
fn wp_limit_at_k_zero_is_bailey_lemma() {
    let pr = catalog("wpAB").unwrap();
    let b = bind(&[("a", rat(2, 3)), ("k", int(0)), ("y", int(2)), ("z", int(3))]);
    let wp = wp_limit_sides(&pr, &b, None, 20).unwrap();
    let classic = bailey_lemma_sides(&bailey_reduction(&pr).unwrap(), &b, None, 20).unwrap();
    assert!(same(&wp.lhs, &classic.lhs, 20));
    assert!(same(&wp.rhs, &classic.rhs, 20));
    assert!(agrees(&wp));
}

#[test]
fn wp_limit_with_infinite_parameters() {
    let pr = catalog("S111").unwrap();
    for names in [&["y", "z"][..], &["z"][..]] {
        let b = with_inf(bind(&[("a", rat(2, 3)), ("k", rat(1, 3)), ("y", int(2))]), names);
        let s = wp_limit_sides(&pr, &b, None, 20).unwrap();
        assert!(agrees(&s), "{names:?}");
    }
    // y = -q^(1/2) moves the sides to scale 2
    let mut b = bind(&[("a", rat(2, 3)), ("k", rat(1, 3)), ("z", int(5))]);
    b.insert("y".into(), ParamValue::Value(Monomial::new(int(-1), exp(1, 2))));
    let s = wp_limit_sides(&pr, &b, None, 15).unwrap();
    assert_eq!(s.scale, 2);
    assert!(agrees(&s));
}

#[test]
fn double_sum_with_delta_alpha_is_6phi5() {
    let alpha = case0(Poly::n(), c(1), c(0));
    let b = bind(&[("k", rat(1, 4)), ("y", int(2)), ("z", int(5))]);
    let s = double_sum_sides(&alpha, &c(1), &b, 1, 20).unwrap();
    assert!(agrees(&s));
    // (qk, qk/yz, q/y, q/z)_inf / (qk/y, qk/z, q, q/yz)_inf at k = 1/4
    let mut want = one(1, 20);
    for (c, inv) in [
        (rat(1, 4), false),
        (rat(1, 40), false),
        (rat(1, 2), false),
        (rat(1, 5), false),
        (rat(1, 8), true),
        (rat(1, 20), true),
        (int(1), true),
        (rat(1, 10), true),
    ] {
        want = inf_product(want, &c, 1, 1, inv);
    }
    assert!(same(&s.rhs, &want, 20));
    assert!(s.terms_used.j.is_some());
}

#[test]
fn double_sum_with_b1_alpha() {
    // alpha_n = (-1)^n q^((3n^2-n)/2) (1 + q^n) for every n, so alpha_0 = 2
    let n = Poly::n();
    let alpha = sign(n) * q(n * n * exp(3, 2) - n * exp(1, 2)) * (c(1) + q(n));
    let b = with_inf(bind(&[("k", rat(1, 3))]), &["y", "z"]);
    let s = double_sum_sides(&alpha, &c(1), &b, 1, 25).unwrap();
    assert!(agrees(&s));
    // (kq)_inf / (q, q^4; q^5)_inf + (kq)_inf / (q)_inf
    let kq = inf_product(one(1, 25), &rat(1, 3), 1, 1, false);
    let rr = inf_product(inf_product(kq.clone(), &int(1), 1, 5, true), &int(1), 4, 5, true);
    let euler = inf_product(kq, &int(1), 1, 1, true);
    assert!(same(&s.lhs, &rr.add(&euler).unwrap(), 25));
}
