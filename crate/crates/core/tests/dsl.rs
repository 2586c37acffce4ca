use proptest::prelude::*;
use wpbailey::dsl::{parse_expr, parse_spec, IdentityDef, Item, SpecDocument};
use wpbailey::expr::{c, case0, eval_to_order, p, poch, poch_inf, pq, q, quad, sign, sqrt_pair, sum, QExpr, SumPolicy};
use wpbailey::pairs::{catalog, verify_pair, PairCheck};
use wpbailey::rational::{exp, rat};
use wpbailey::report::Status;
use wpbailey::verify::{identity_cases, sample_bindings, verify_identity, VerifyOptions};
use wpbailey::{ParamBinding, ParamValue, Poly, Var};

const RR1: &str = "identity rr1 { lhs = sum(n) q^(n^2) / poch(q;1;n); rhs = 1/(pochinf(q;5)*pochinf(q^(4);5)); }";
const H6: &str = "pair h6 { alpha(n) = case0(1, 0); beta(n) = poch(k;1;n)*poch(k;1;n)/(poch(q;1;n)*poch(q;1;n)); a = 1; require k != 1; }";

fn round_trip(doc: &SpecDocument) {
    let text = doc.to_string();
    let again = parse_spec(&text).unwrap_or_else(|e| panic!("{}\n{text}", e.render(&text)));
    assert_eq!(&again, doc, "\n{text}");
    assert_eq!(again.to_string(), text);
}

#[test]
fn rr1_document() {
    let doc = parse_spec(RR1).unwrap();
    assert_eq!(doc.items.len(), 1);
    let id = doc.identities().next().unwrap();
    assert_eq!(id.name, "rr1");
    let r = verify_identity(&id.to_case(), &VerifyOptions::default());
    assert_eq!(r.status, Status::Pass);
    round_trip(&doc);
}

#[test]
fn h6_pair_document() {
    let doc = parse_spec(H6).unwrap();
    let def = doc.pairs().next().unwrap();
    assert_eq!(def.alpha, case0(Poly::n(), c(1), c(0)));
    assert_eq!(def.a, Some(c(1)));
    assert_eq!(def.requires.len(), 1);
    let pr = def.to_pair();
    let cat = catalog("H6prime").unwrap();
    let b: ParamBinding = [("k".to_string(), ParamValue::rational(rat(2, 5)))].into();
    let mine = pr.beta_table(&b, 5, 10).unwrap();
    let theirs = cat.beta_table(&b, 5, 10).unwrap();
    assert_eq!(mine, theirs);
    let r = verify_pair(&pr, &PairCheck::sampled(&pr, 3, 1, 6, 12, 1)).unwrap();
    assert_eq!(r.status, Status::Pass, "{}", r.summary_line());
    round_trip(&doc);
}

#[test]
fn nonlinear_poch_count_is_rejected_with_span() {
    let text = "identity bad { lhs = sum(n) poch(q;1;n*n); rhs = 1; }";
    let err = parse_spec(text).unwrap_err();
    assert!(err.message.contains("poch count must be linear"), "{err}");
    assert_eq!(&text[err.span.start..err.span.end], "n*n");
    assert_eq!((err.span.line, err.span.column), (1, 38));
}

#[test]
fn unbound_variable_is_reported() {
    let text = "identity x {\n  lhs = sum(n) q^(j);\n  rhs = 1;\n}";
    let err = parse_spec(text).unwrap_err();
    assert!(err.message.contains("`j` is not bound"), "{err}");
    assert_eq!((err.span.line, &text[err.span.start..err.span.end]), (2, "j"));
    let err = parse_spec("pair p { alpha(n) = q^(j); }").unwrap_err();
    assert!(err.message.contains("`j`"));
}

#[test]
fn expected_tokens_are_listed() {
    let err = parse_spec("identity x { lhs = 1 rhs = 2; }").unwrap_err();
    assert!(err.expected.contains(&"`;`".to_string()), "{err}");
    let err = parse_spec("identity x { lhs = ; rhs = 2; }").unwrap_err();
    assert!(err.expected.iter().any(|e| e == "`poch`"), "{err}");
    let err = parse_spec("widget x {}").unwrap_err();
    assert_eq!(err.expected, vec!["`pair`", "`identity`"]);
    assert!(err.render("widget x {}").contains("^^^^^^"));
}

#[test]
fn duplicate_names_are_rejected() {
    let err = parse_spec(&format!("{RR1}\n{RR1}")).unwrap_err();
    assert!(err.message.contains("defined twice"));
    assert_eq!(err.span.line, 2);
}

#[test]
fn lexical_errors() {
    let err = parse_spec("identity x { lhs = 1 @ 2; rhs = 1; }").unwrap_err();
    assert!(err.message.contains("unexpected character `@`"));
    assert!(parse_spec("identity x { lhs = 1/0; rhs = 1; }").is_err());
    assert!(parse_spec("identity x { lhs = foo(1); rhs = 1; }").unwrap_err().message.contains("unknown function"));
}

#[test]
fn optional_clauses_and_comments() {
    let text = "# comment\nidentity \"q1/2x\" {\n  lhs = sum(n; 3) sqrtpair(2*n)*quadpair(k; n)*(-1)^(n)*k^(n);\n  rhs = case0(0; 1, 2);\n  order = 12;\n  scale = 2;\n  require k != 0;\n  require k != -1/2;\n}\n";
    let doc = parse_spec(text).unwrap();
    let d = doc.identities().next().unwrap();
    assert_eq!(d.name, "q1/2x");
    assert_eq!((d.order, d.scale, d.requires.len()), (Some(12), Some(2), 2));
    round_trip(&doc);
}

fn eval(e: &QExpr, b: &ParamBinding, scale: u32, order: i64) -> wpbailey::QSeries {
    eval_to_order(e, b, scale, order, SumPolicy::default()).unwrap().0
}

#[test]
fn catalog_identities_survive_printing() {
    for case in identity_cases() {
        let def = IdentityDef::from_case(&case);
        let doc = SpecDocument { items: vec![Item::Identity(def)] };
        let text = doc.to_string();
        let parsed = parse_spec(&text).unwrap_or_else(|e| panic!("{}: {}", case.id, e.render(&text)));
        round_trip(&parsed);
        let back = parsed.identities().next().unwrap().to_case();
        assert_eq!(back.id, case.id);
        let b = &sample_bindings(&case, 1, 3)[0];
        let order = 8;
        let (l0, l1) = (eval(&case.lhs, b, case.scale, order), eval(&back.lhs, b, back.scale, order));
        assert_eq!(l0.first_difference_t(&l1, order * case.scale as i64), None, "{}", case.id);
        let (r0, r1) = (eval(&case.rhs, b, case.scale, order), eval(&back.rhs, b, back.scale, order));
        assert_eq!(r0.first_difference_t(&r1, order * case.scale as i64), None, "{}", case.id);
    }
}

#[test]
fn printed_divisor_stays_separate() {
    let e = (p("x") * c(3)) / c(2).pow(Poly::n());
    let text = e.to_string();
    let back = parse_expr(&text, &[Var::N]).unwrap();
    assert_eq!(back, e, "{text}");
}

fn leaf() -> impl Strategy<Value = QExpr> {
    prop_oneof![
        (1i64..6).prop_map(c),
        (-5i64..6, 2i64..5).prop_map(|(a, b)| QExpr::Const(rat(a, b))),
        prop::sample::select(vec!["k", "a", "x"]).prop_map(p),
        (-3i64..4, -2i64..3, 0i64..2).prop_map(|(a, b, d)| q(Poly::n() * Poly::n() * exp(d, 2) + Poly::n() * b + a)),
        (0i64..3).prop_map(|a| sign(Poly::n() + a)),
        (0i64..3, 1i64..3).prop_map(|(a, s)| poch(p("k") * q(a), s, Poly::n() + a)),
        (1i64..3).prop_map(|s| poch_inf(q(s), s)),
        Just(sqrt_pair(p("k"), Poly::n() * 2)),
        Just(quad(p("k"), Poly::n())),
        Just(pq(q(exp(1, 2)), Poly::n())),
    ]
}

fn expr() -> impl Strategy<Value = QExpr> {
    leaf().prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(|v| v.into_iter().reduce(|a, b| a * b).unwrap()),
            prop::collection::vec(inner.clone(), 2..4).prop_map(|v| v.into_iter().reduce(|a, b| a + b).unwrap()),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a / b),
            inner.clone().prop_map(|a| -a),
            inner.clone().prop_map(|a| a.pow(Poly::n())),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| case0(Poly::n(), a, b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printing_reaches_a_fixed_point(e in expr()) {
        let text = e.to_string();
        let once = parse_expr(&text, &[Var::N]).map_err(|d| TestCaseError::fail(d.render(&text)))?;
        let text2 = once.to_string();
        let twice = parse_expr(&text2, &[Var::N]).map_err(|d| TestCaseError::fail(d.render(&text2)))?;
        prop_assert_eq!(&twice, &once);
        prop_assert_eq!(twice.to_string(), text2);
    }

    #[test]
    fn reparsed_expressions_evaluate_alike(e in expr(), n in 0i64..4) {
        let text = e.to_string();
        let back = parse_expr(&text, &[Var::N]).unwrap();
        let b: ParamBinding = [("k", rat(1, 3)), ("a", rat(2, 5)), ("x", rat(-3, 7))]
            .into_iter()
            .map(|(k, v)| (k.to_string(), ParamValue::rational(v)))
            .collect();
        let wrap = |x: QExpr| sum(Var::N, case0(Poly::n() - n, x, c(0)));
        let l = eval_to_order(&wrap(e.clone()), &b, 2, 6, SumPolicy::default());
        let r = eval_to_order(&wrap(back), &b, 2, 6, SumPolicy::default());
        match (l, r) {
            (Ok((l, _)), Ok((r, _))) => prop_assert_eq!(l.first_difference_t(&r, 12), None),
            (Err(a), Err(b)) => prop_assert_eq!(a.is_singular(), b.is_singular()),
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a.map(|x| x.0), b.map(|x| x.0)),
        }
    }

    #[test]
    fn diagnostics_stay_in_bounds(cut in 0usize..RR1.len(), ch in prop::sample::select(vec!['(', ')', ';', '^', '@', '"', 'n', '-', '/'])) {
        let mut text = RR1.to_string();
        text.insert(cut, ch);
        if let Err(d) = parse_spec(&text) {
            prop_assert!(d.span.start <= d.span.end && d.span.end <= text.len());
            let _ = d.render(&text);
        }
        let mut text = RR1.to_string();
        text.remove(cut);
        if let Err(d) = parse_spec(&text) {
            prop_assert!(d.span.start <= d.span.end && d.span.end <= text.len());
        }
    }
}
