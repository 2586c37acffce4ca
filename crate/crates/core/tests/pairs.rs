use proptest::prelude::*;
use wpbailey::expr::{c, case0, p, q, singular_set, Constraint, Subst};
use wpbailey::pairs::{
    bailey_reduction, catalog, classic_dual, combinator_linear, combinator_star, dual_wp, shift_pairs, unit_pair,
    verify_pair, wp_transform, wp_transform_direct, PairCheck, PairKind, PairSpec, SUPPORTED_TRIPLES,
};
use wpbailey::rational::{int, rat};
use wpbailey::report::Status;
use wpbailey::{ParamBinding, ParamValue, Poly, QExpr, QRational, QSeries};

fn bind(pairs: &[(&str, QRational)]) -> ParamBinding {
    pairs.iter().map(|(k, v)| (k.to_string(), ParamValue::rational(v.clone()))).collect()
}

fn ak(a: QRational, k: QRational) -> ParamBinding {
    bind(&[("a", a), ("k", k)])
}

fn check(p: &PairSpec, k: usize, n_max: i64, order: i64) -> wpbailey::report::VerificationReport {
    let mut check = PairCheck::sampled(p, k, 1, n_max, order, 1);
    check.jobs = Some(1);
    verify_pair(p, &check).unwrap()
}

fn passes(p: &PairSpec, n_max: i64) -> bool {
    let r = check(p, 3, n_max, 10);
    if !r.passed() {
        eprintln!("{}", r.summary_line());
    }
    r.passed()
}

/// Product of binomials `(1 - c t^m)` over product of binomials, times
/// `c0 t^m0`, built directly from series operations.
fn binomials(scale: u32, prec: i64, lead: (QRational, i64), num: &[(QRational, i64)], den: &[(QRational, i64)]) -> QSeries {
    let mut s = QSeries::monomial_t(scale, lead.0, lead.1, prec);
    for (c, m) in num {
        s = s.mul_binomial_t(c, *m);
    }
    for (c, m) in den {
        s = s.div_binomial_t(c, *m).unwrap();
    }
    s
}

fn same_upto(a: &QSeries, b: &QSeries, prec: i64) -> bool {
    a.first_difference_t(b, prec).is_none()
}

fn tables_agree(x: &PairSpec, y: &PairSpec, b: &ParamBinding, n_max: i64, order: i64) -> bool {
    let scale = x.scale.max(y.scale);
    let prec = order * scale as i64;
    let lift = |t: Vec<QSeries>| -> Vec<QSeries> { t.iter().map(|v| v.with_scale(scale)).collect() };
    let (xa, ya) = (lift(x.alpha_table(b, n_max, order).unwrap()), lift(y.alpha_table(b, n_max, order).unwrap()));
    let (xb, yb) = (lift(x.beta_table(b, n_max, order).unwrap()), lift(y.beta_table(b, n_max, order).unwrap()));
    xa.iter().zip(&ya).chain(xb.iter().zip(&yb)).all(|(u, v)| same_upto(u, v, prec))
}

#[test]
fn every_catalog_pair_verifies() {
    let mut ids: Vec<String> = [
        "E7prime", "F3prime", "F4prime", "H3prime", "H4prime", "H5prime", "H6prime", "H7prime", "H8prime",
        "H12prime", "H13prime", "H17prime", "newwp", "H3primedual", "singh(2,3)", "singh(-1/2,5)",
        "singh(3,q)", "wpS(2,3)", "singh-cinf-dq", "S111", "E111", "JS111", "S112", "B1", "B2", "H3",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for fam in ["SMBP", "EMBP", "JSMBP"] {
        for (d, e, h) in SUPPORTED_TRIPLES {
            ids.push(format!("{fam}({d},{e},{h})"));
        }
    }
    let bad: Vec<_> = ids.iter().filter(|id| !passes(&catalog(id).unwrap(), 6)).collect();
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn singh_and_e7_examples_pass() {
    let r = check(&catalog("singh(2,3)").unwrap(), 3, 6, 10);
    assert_eq!(r.status, Status::Pass);
    let e7 = catalog("E7prime").unwrap();
    let mut chk = PairCheck::sampled(&e7, 3, 1, 8, 12, 1);
    chk.k_samples = vec![rat(1, 2), rat(2, 3), int(5)];
    assert_eq!(verify_pair(&e7, &chk).unwrap().status, Status::Pass);
}

#[test]
fn horner_transform_matches_direct_sum() {
    for id in ["E7prime", "F3prime", "H12prime", "singh(2,3)", "JS111", "SMBP(2,1,1)"] {
        let p = catalog(id).unwrap();
        let b = ak(rat(2, 3), rat(-5, 7));
        let fast = wp_transform(&p, &b, 5, 10).unwrap();
        let slow = wp_transform_direct(&p, &b, 5, 10).unwrap();
        let prec = 10 * p.scale as i64;
        for (n, (x, y)) in fast.iter().zip(&slow).enumerate() {
            assert!(same_upto(x, y, prec), "{id} n={n}");
        }
    }
}

#[test]
fn empty_transform_gives_beta0_one() {
    let p = catalog("H17prime").unwrap();
    let t = wp_transform(&p, &ak(int(1), rat(2, 5)), 0, 8).unwrap();
    assert!(same_upto(&t[0], &QSeries::one(1, 8), 8));
}

#[test]
fn h6_beta1_from_single_alpha_term() {
    let p = catalog("H6prime").unwrap();
    let k = rat(1, 3);
    let t = wp_transform(&p, &bind(&[("k", k.clone())]), 1, 15).unwrap();
    let one_k = QRational::from_integer(1.into()) - &k;
    let oracle = binomials(1, 15, (one_k.clone() * one_k, 0), &[], &[(int(1), 1), (int(1), 1)]);
    assert!(same_upto(&t[1], &oracle, 15));
}

#[test]
fn newwp_beta2_matches_closed_form() {
    let p = catalog("newwp").unwrap();
    assert_eq!(p.scale, 2);
    let k = rat(1, 2);
    let t = wp_transform(&p, &bind(&[("k", k.clone())]), 2, 12).unwrap();
    // (k q^(1/2), k; q)_2 / (q^(1/2), q; q)_2 * q^-1 in t = q^(1/2)
    let oracle = binomials(
        2,
        24,
        (int(1), -2),
        &[(k.clone(), 1), (k.clone(), 3), (k.clone(), 0), (k.clone(), 2)],
        &[(int(1), 1), (int(1), 3), (int(1), 2), (int(1), 4)],
    );
    assert!(same_upto(&t[2], &oracle, 24));
}

#[test]
fn h13_and_s111_closed_forms() {
    let k = rat(1, 3);
    let h13 = catalog("H13prime").unwrap();
    let b = h13.beta_table(&bind(&[("k", k.clone())]), 2, 12).unwrap();
    // (k, k/q; q)_2 / (q, q^2; q)_2
    let oracle = binomials(
        1,
        14,
        (int(1), 0),
        &[(k.clone(), 0), (k.clone(), 1), (k.clone(), -1), (k.clone(), 0)],
        &[(int(1), 1), (int(1), 2), (int(1), 2), (int(1), 3)],
    );
    assert!(same_upto(&b[2], &oracle, 12));

    let a = rat(2, 3);
    let s111 = catalog("S111").unwrap();
    let b = s111.beta_table(&ak(a.clone(), k.clone()), 1, 12).unwrap();
    let lead = -(k.clone() * (QRational::from_integer(1.into()) - &k)) / a;
    let oracle = binomials(1, 12, (lead, 0), &[], &[(int(1), 1)]);
    assert!(same_upto(&b[1], &oracle, 12));
}

#[test]
fn smbp112_alpha2() {
    let a = rat(-3, 7);
    let p = catalog("SMBP(1,1,2)").unwrap();
    let t = p.alpha_table(&ak(a.clone(), rat(2, 5)), 2, 16).unwrap();
    // a^2 q^5 (1 - a q^4)(a; q)_2 / ((1 - a)(q; q)_2)
    let oracle = binomials(1, 16, (a.clone() * &a, 5), &[(a.clone(), 4), (a.clone(), 1)], &[(int(1), 1), (int(1), 2)]);
    assert!(same_upto(&t[2], &oracle, 16));
}

#[test]
fn perturbed_beta_fails_at_n1() {
    let mut p = catalog("H4prime").unwrap();
    let beta = p.beta.clone().unwrap();
    p.beta = Some(case0(Poly::n(), c(1), (c(1) + q(1)) * beta));
    let r = check(&p, 3, 4, 10);
    assert_eq!(r.status, Status::Fail);
    let m = r.first_mismatch.expect("mismatch recorded");
    assert_ne!(m.lhs, m.rhs);
    assert!(r.detail.unwrap().starts_with("beta_1 "));
}

#[test]
fn k_zero_reductions_are_bailey_pairs() {
    for id in [
        "E7prime", "F3prime", "F4prime", "H3prime", "H4prime", "H5prime", "H6prime", "H7prime", "H8prime",
        "H12prime", "H13prime", "H17prime", "singh(2,3)", "S111", "S112", "E111", "JS111",
    ] {
        let r = bailey_reduction(&catalog(id).unwrap()).unwrap();
        assert_eq!(r.kind, PairKind::Bailey);
        assert!(passes(&r, 6), "{id}");
    }
    // the reduction of Singh's pair is Slater's
    let s = bailey_reduction(&catalog("singh(2,3)").unwrap()).unwrap();
    let w = catalog("wpS(2,3)").unwrap();
    assert!(tables_agree(&s, &w, &bind(&[("a", rat(5, 2))]), 6, 10));
}

#[test]
fn lifted_alphas_do_not_involve_k() {
    let mut ids = vec!["newwp".to_string()];
    for fam in ["SMBP", "EMBP", "JSMBP"] {
        for (d, e, h) in SUPPORTED_TRIPLES {
            ids.push(format!("{fam}({d},{e},{h})"));
        }
    }
    for id in &ids {
        let p = catalog(id).unwrap();
        assert!(p.k_free(), "{id}");
        let x = p.alpha_table(&ak(rat(2, 3), rat(1, 3)), 6, 10).unwrap();
        let y = p.alpha_table(&ak(rat(2, 3), rat(-5, 2)), 6, 10).unwrap();
        assert_eq!(x, y, "{id}");
    }
    // Singh's alpha carries k through (a^2 q/(k c d); q)_n (k/a)^n
    assert!(!catalog("singh(2,3)").unwrap().k_free());
}

#[test]
fn multiparam_families_match_closed_forms() {
    for (fam, id) in [("SMBP(1,1,1)", "S111"), ("EMBP(1,1,1)", "E111"), ("JSMBP(1,1,1)", "JS111"), ("SMBP(1,1,2)", "S112")] {
        let x = catalog(fam).unwrap();
        let y = catalog(id).unwrap();
        for b in [ak(rat(2, 3), rat(1, 3)), ak(rat(-3, 7), int(3))] {
            assert!(tables_agree(&x, &y, &b, 8, 10), "{fam} vs {id}");
        }
    }
}

#[test]
fn star_and_linear_rebuild_h3_and_h8() {
    let h4 = catalog("H4prime").unwrap();
    let star = combinator_star(&h4).unwrap();
    let h3 = combinator_linear(&h4, &star, c(-1), c(1)).unwrap();
    assert!(passes(&h3, 8));
    for k in [rat(1, 3), rat(-2, 5)] {
        assert!(tables_agree(&h3, &catalog("H3prime").unwrap(), &bind(&[("k", k)]), 8, 12));
    }

    let h7 = catalog("H7prime").unwrap();
    let star = combinator_star(&h7).unwrap();
    let h8 = combinator_linear(&h7, &star, c(0), QExpr::Const(rat(1, 2))).unwrap();
    assert!(passes(&h8, 8));
    assert!(tables_agree(&h8, &catalog("H8prime").unwrap(), &bind(&[("k", rat(5, 7))]), 8, 12));
}

#[test]
fn star_needs_k_free_alpha() {
    // a pair whose alpha mentions k
    let p = PairSpec::wp("kdep", case0(Poly::n(), c(1), p("k")), c(1), c(1));
    assert!(combinator_star(&p).is_err());
}

fn specialize_a(pr: &PairSpec, a: QExpr) -> PairSpec {
    let s = Subst::param("a", a.clone());
    let mut out = PairSpec::wp(
        &format!("{}@a", pr.name),
        wpbailey::expr::simplify(&s.apply(&pr.alpha).unwrap()),
        wpbailey::expr::simplify(&s.apply(pr.beta.as_ref().unwrap()).unwrap()),
        a,
    );
    out.refresh_constraints();
    out
}

#[test]
fn singh_limit_specializes_to_h5_and_h12() {
    let base = catalog("singh-cinf-dq").unwrap();
    let lin = combinator_linear(&base, &base, c(1) - p("a"), c(0)).unwrap();
    assert!(passes(&lin, 6));
    let at1 = specialize_a(&lin, c(1));
    let atq = specialize_a(&lin, q(1));
    assert!(passes(&at1, 8));
    assert!(passes(&atq, 8));
    for k in [rat(1, 3), rat(7, 2)] {
        let b = bind(&[("k", k)]);
        assert!(tables_agree(&at1, &catalog("H5prime").unwrap(), &b, 8, 12));
        assert!(tables_agree(&atq, &catalog("H12prime").unwrap(), &b, 8, 12));
    }
}

#[test]
fn linear_degenerate_weights() {
    let p1 = catalog("H17prime").unwrap();
    let p2 = catalog("H7prime").unwrap();
    let b = bind(&[("k", rat(2, 5))]);
    let same = combinator_linear(&p1, &p2, c(1), c(0)).unwrap();
    assert!(tables_agree(&same, &p1, &b, 6, 10));
    let unit = combinator_linear(&p1, &p2, c(0), c(0)).unwrap();
    assert!(tables_agree(&unit, &unit_pair(c(1), PairKind::Wp), &b, 6, 10));
    assert!(passes(&unit, 6));
    // different a
    assert!(combinator_linear(&p1, &catalog("E7prime").unwrap(), c(1), c(1)).is_err());
}

#[test]
fn shift_pairs_of_slater_verify() {
    let (star, dagger) = shift_pairs(&catalog("wpS(2,3)").unwrap()).unwrap();
    assert!(passes(&star, 8));
    assert!(passes(&dagger, 8));
    let b = bind(&[("a", rat(2, 3))]);
    assert!(same_upto(&dagger.beta_table(&b, 0, 6).unwrap()[0], &QSeries::one(1, 6), 6));
}

#[test]
fn shift_of_unit_pair() {
    let (star, _) = shift_pairs(&unit_pair(p("a"), PairKind::Bailey)).unwrap();
    let a = rat(2, 3);
    let b = bind(&[("a", a.clone())]);
    let alpha = star.alpha_table(&b, 1, 10).unwrap();
    assert!(same_upto(&alpha[1], &QSeries::monomial_t(1, -a.clone(), 1, 10), 10));
    let beta = star.beta_table(&b, 3, 10).unwrap();
    // 1/((q;q)_3 (a q^2;q)_3)
    let oracle = binomials(
        1,
        10,
        (int(1), 0),
        &[],
        &[(int(1), 1), (int(1), 2), (int(1), 3), (a.clone(), 2), (a.clone(), 3), (a, 4)],
    );
    assert!(same_upto(&beta[3], &oracle, 10));
    assert!(passes(&star, 6));
}

#[test]
fn shift_rejects_wp_pairs() {
    assert!(shift_pairs(&catalog("S111").unwrap()).is_err());
}

#[test]
fn wp_dual_is_an_involution() {
    for id in ["H3prime", "E7prime", "F3prime", "S111", "singh(2,3)"] {
        let p = catalog(id).unwrap();
        let dd = dual_wp(&dual_wp(&p).unwrap()).unwrap();
        for b in [ak(rat(2, 3), rat(1, 3)), ak(rat(-3, 7), rat(5, 2))] {
            assert!(tables_agree(&p, &dd, &b, 5, 10), "{id}");
        }
    }
}

#[test]
fn duals_are_pairs() {
    let d = dual_wp(&catalog("H3prime").unwrap()).unwrap();
    assert!(passes(&d, 6));
    for k in [rat(1, 3), rat(-2, 5)] {
        assert!(tables_agree(&d, &catalog("H3primedual").unwrap(), &bind(&[("k", k)]), 6, 10));
    }
    let d = classic_dual(&catalog("B2").unwrap()).unwrap();
    assert!(passes(&d, 6));
    assert!(tables_agree(&d, &catalog("H3").unwrap(), &ParamBinding::new(), 6, 12));
}

#[test]
fn singular_constraints() {
    let e = c(1) / (c(1) - p("k"));
    assert_eq!(singular_set(&e), vec![Constraint::new("k", int(1))]);
    let e = p("k").pow(Poly::n() * -2);
    assert_eq!(singular_set(&e), vec![Constraint::new("k", int(0))]);
    let h5 = catalog("H5prime").unwrap();
    assert!(singular_set(h5.beta.as_ref().unwrap()).contains(&Constraint::new("k", int(1))));
    assert!(h5.constraints.contains(&Constraint::new("k", int(1))));
}

#[test]
fn unknown_and_unsupported_ids() {
    assert!(catalog("H99prime").is_err());
    assert!(catalog("SMBP(4,1,1)").is_err());
    assert!(catalog("singh(2)").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn alpha0_and_beta0_are_one(idx in 0usize..10, an in 1i64..9, ad in 2i64..9, kn in 1i64..9, kd in 2i64..9) {
        let ids = ["E7prime", "F4prime", "H3prime", "H12prime", "newwp", "singh(2,3)", "S111", "JS111", "EMBP(1,2,1)", "JSMBP(2,1,3)"];
        let p = catalog(ids[idx]).unwrap();
        let b = ak(rat(an, ad), rat(kn, kd));
        let one = QSeries::one(p.scale, 6);
        let prec = 6 * p.scale as i64;
        prop_assert!(same_upto(&p.alpha_table(&b, 0, 6).unwrap()[0], &one, prec));
        prop_assert!(same_upto(&p.beta_table(&b, 0, 6).unwrap()[0], &one, prec));
    }

    #[test]
    fn transform_matches_beta_at_random_bindings(idx in 0usize..6, an in 1i64..9, ad in 2i64..9, kn in 1i64..9, kd in 2i64..9) {
        let ids = ["H8prime", "F3prime", "singh(2,3)", "S112", "SMBP(2,1,2)", "EMBP(1,1,2)"];
        let p = catalog(ids[idx]).unwrap();
        let b = ak(rat(an, ad), rat(kn, kd));
        prop_assume!(p.constraints.iter().all(|c| c.admits(&rat(kn, kd)) || c.param != "k"));
        let prec = 8 * p.scale as i64;
        match (wp_transform(&p, &b, 4, 8), p.beta_table(&b, 4, 8)) {
            (Ok(t), Ok(beta)) => {
                for (x, y) in t.iter().zip(&beta) {
                    prop_assert!(same_upto(x, y, prec));
                }
            }
            // a sampled value can still hit a removable singularity
            _ => {}
        }
    }
}
