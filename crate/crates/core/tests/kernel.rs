use std::collections::BTreeMap;

use num_traits::Zero;
use proptest::prelude::*;
use wpbailey::expr::{
    c, degree_bound, eval_to_order, p, poch, pq, q, sum, EvalContext, EvalError, SumPolicy,
};
use wpbailey::qkernel::{hyper_sum, jtp, poch_inf, quad_poch_ratio, sqrt_pair_ratio, SumLimit};
use wpbailey::rational::{exp, int, rat};
use wpbailey::{Monomial, ParamBinding, ParamValue, Poly, QRational, Var};

fn qpow(e: i64) -> Monomial {
    Monomial::q_pow(exp(e, 1))
}

/// Euler's pentagonal number theorem, as an independent oracle for (q;q)_inf.
fn pentagonal(order: i64) -> BTreeMap<i64, i64> {
    let mut out = BTreeMap::new();
    for k in -20i64..=20 {
        let e = k * (3 * k - 1) / 2;
        if e <= order {
            out.insert(e, if k % 2 == 0 { 1 } else { -1 });
        }
    }
    out
}

/// Number of partitions of m into parts congruent to 1 or 4 mod 5.
fn rr_partitions(m: usize) -> i64 {
    let mut ways = vec![0i64; m + 1];
    ways[0] = 1;
    for part in (1..=m).filter(|p| p % 5 == 1 || p % 5 == 4) {
        for s in part..=m {
            ways[s] += ways[s - part];
        }
    }
    ways[m]
}

#[test]
fn euler_product_matches_pentagonal_numbers() {
    let s = poch_inf(&qpow(1), exp(1, 1), 1, 40).unwrap();
    let oracle = pentagonal(40);
    for e in 0..=40 {
        assert_eq!(s.coeff_t(e), int(*oracle.get(&e).unwrap_or(&0)), "q^{e}");
    }
}

#[test]
fn jtp_at_q() {
    let s = jtp(&qpow(1), 1, 6).unwrap();
    let expect: Vec<(i64, i64)> = vec![(0, 2), (2, 2), (6, 2)];
    for e in 0..=6 {
        let want = expect.iter().find(|t| t.0 == e).map_or(0, |t| t.1);
        assert_eq!(s.coeff_t(e), int(want));
    }
}

/// Direct bilateral sum sum_n x^n q^(n^2), as an oracle.
fn bilateral(x: &Monomial, scale: u32, order: i64) -> BTreeMap<i64, QRational> {
    let mut out: BTreeMap<i64, QRational> = BTreeMap::new();
    for n in -40i64..=40 {
        let e = x.exp * exp(n, 1) + exp(n * n, 1);
        let t = e * exp(scale as i64, 1);
        if t.to_integer() <= order * scale as i64 {
            let c = x.pow(n).unwrap().coeff;
            *out.entry(t.to_integer()).or_insert_with(QRational::zero) += c;
        }
    }
    out
}

proptest! {
    #[test]
    fn jtp_product_equals_bilateral_sum(cn in -3i64..4, cd in 1i64..4, e in prop::sample::select(vec![-1i64, 0, 1])) {
        prop_assume!(cn != 0);
        let x = Monomial::new(rat(cn, cd), exp(e, 1));
        let s = jtp(&x, 1, 25).unwrap();
        let oracle = bilateral(&x, 1, 25);
        for t in s.valuation_t().unwrap_or(0).min(0)..=25 {
            prop_assert_eq!(s.coeff_t(t), oracle.get(&t).cloned().unwrap_or_default());
        }
    }

    #[test]
    fn finite_poch_matches_repeated_binomials(cn in -4i64..5, cd in 1i64..4, e in -2i64..3, n in 0u32..7) {
        let x = Monomial::new(rat(cn, cd), exp(e, 1));
        let s = wpbailey::qkernel::poch(&x, exp(1, 1), n, 1, 20).unwrap();
        let mut naive: BTreeMap<i64, QRational> = BTreeMap::from([(0, int(1))]);
        for i in 0..n as i64 {
            let mut next: BTreeMap<i64, QRational> = BTreeMap::new();
            for (k, v) in &naive {
                *next.entry(*k).or_insert_with(QRational::zero) += v.clone();
                *next.entry(k + e + i).or_insert_with(QRational::zero) -= v * &x.coeff;
            }
            naive = next;
        }
        for t in -30..=s.prec_t() {
            prop_assert_eq!(s.coeff_t(t), naive.get(&t).cloned().unwrap_or_default());
        }
    }
}

#[test]
fn rogers_ramanujan_sum_counts_partitions() {
    let term = q(Poly::n() * Poly::n()) / pq(q(1), Poly::n());
    let (s, used) = hyper_sum(&term, SumLimit::Adaptive, &ParamBinding::new(), 1, 5).unwrap();
    let expected = [1, 1, 1, 1, 2, 2];
    for (e, want) in expected.iter().enumerate() {
        assert_eq!(s.coeff_t(e as i64), int(*want));
    }
    assert!(used.n >= 2);
    let (s, _) = hyper_sum(&term, SumLimit::Adaptive, &ParamBinding::new(), 1, 40).unwrap();
    for m in 0..=40 {
        assert_eq!(s.coeff_t(m), int(rr_partitions(m as usize)), "q^{m}");
    }
}

#[test]
fn adaptive_sum_agrees_with_explicit_bound() {
    let term = q(Poly::n() * Poly::n()) / pq(q(1), Poly::n());
    let b = ParamBinding::new();
    let (adaptive, used) = hyper_sum(&term, SumLimit::Adaptive, &b, 1, 30).unwrap();
    let (fixed, _) = hyper_sum(&term, SumLimit::Upto(used.n), &b, 1, 30).unwrap();
    assert_eq!(adaptive, fixed);
}

#[test]
fn quadratic_and_sqrt_ratios() {
    let one = wpbailey::QSeries::one(1, 10);
    assert_eq!(quad_poch_ratio(&rat(1, 3), 0, 1, 10).unwrap(), one);
    assert_eq!(sqrt_pair_ratio(&rat(1, 3), 0, 1, 10).unwrap(), one);
    // (1 - q + k q^2)/k at k = 1/2
    let s = quad_poch_ratio(&rat(1, 2), 1, 1, 10).unwrap();
    assert_eq!(s.coeff_t(0), int(2));
    assert_eq!(s.coeff_t(1), int(-2));
    assert_eq!(s.coeff_t(2), int(1));
    // (1 - k q^2)/(1 - k) at k = 1/2
    let s = sqrt_pair_ratio(&rat(1, 2), 1, 1, 10).unwrap();
    assert_eq!(s.coeff_t(0), int(2));
    assert_eq!(s.coeff_t(2), int(-1));
}

#[test]
fn infinite_product_domain_errors() {
    assert!(matches!(poch_inf(&qpow(-1), exp(1, 1), 1, 5), Err(EvalError::Domain(_))));
    assert!(matches!(poch_inf(&qpow(1), exp(-1, 1), 1, 5), Err(EvalError::Domain(_))));
    // (1; q)_inf vanishes identically
    assert!(poch_inf(&Monomial::one(), exp(1, 1), 1, 5).unwrap().is_zero());
}

#[test]
fn negative_poch_count_is_a_domain_error() {
    let e = pq(p("k"), Poly::n() - 3);
    let b = ParamBinding::from([("k".to_string(), ParamValue::rational(rat(1, 2)))]);
    let ctx = EvalContext::new(&b, 1, 10);
    assert!(matches!(ctx.eval_at(&e, 1, None), Err(EvalError::Domain(_))));
}

#[test]
fn singular_factor_is_reported() {
    let e = c(1) / pq(c(1), 2);
    let b = ParamBinding::new();
    assert!(EvalContext::new(&b, 1, 5).eval(&e).unwrap_err().is_singular());
}

#[test]
fn divergent_sum_is_reported() {
    let e = sum(Var::N, c(1));
    let b = ParamBinding::new();
    let err = EvalContext::new(&b, 1, 5).eval(&e).unwrap_err();
    assert!(err.is_nonconvergent(), "{err}");
}

#[test]
fn deepening_recovers_order_lost_to_negative_exponents() {
    // q^-5 * (q;q)_inf needs five extra orders of working precision
    let e = q(-5) * wpbailey::expr::poch_inf(q(1), 1);
    let (s, _) = eval_to_order(&e, &ParamBinding::new(), 1, 20, SumPolicy::default()).unwrap();
    assert_eq!(s.prec_t(), 20);
    assert_eq!(s.coeff_t(-5), int(1));
    assert_eq!(s.coeff_t(-4), int(-1));
}

#[test]
fn degree_audit_bounds_a_finite_identity() {
    // (1 - q^3)/(1 - q) = 1 + q + q^2
    let lhs = poch(q(3), 1, 1) / poch(q(1), 1, 1);
    let rhs = c(1) + q(1) + q(2);
    let b = ParamBinding::new();
    let bound = degree_bound(&lhs, &rhs, &b, 1).unwrap().unwrap();
    assert!(bound >= 3 && bound <= 4, "bound {bound}");
    let l = EvalContext::new(&b, 1, bound).eval(&lhs).unwrap();
    let r = EvalContext::new(&b, 1, bound).eval(&rhs).unwrap();
    assert_eq!(l, r);
}

#[test]
fn monomial_parsing() {
    let m: Monomial = "-1/3*q^(1/2)".parse().unwrap();
    assert_eq!(m, Monomial::new(rat(-1, 3), exp(1, 2)));
    assert_eq!("q".parse::<Monomial>().unwrap(), qpow(1));
    assert_eq!("2/5".parse::<Monomial>().unwrap(), Monomial::constant(rat(2, 5)));
    assert_eq!("-q^2".parse::<Monomial>().unwrap(), Monomial::new(int(-1), exp(2, 1)));
}

fn coeffs(s: &wpbailey::QSeries, upto: i64) -> Vec<QRational> {
    (0..=upto).map(|e| s.coeff_t(e)).collect()
}

fn ints(v: &[i64]) -> Vec<QRational> {
    v.iter().map(|x| int(*x)).collect()
}

#[test]
fn small_pochhammers_by_hand() {
    let kp = wpbailey::qkernel::poch;
    // (q; q)_3 = (1 - q)(1 - q^2)(1 - q^3)
    let s = kp(&qpow(1), exp(1, 1), 3, 1, 8).unwrap();
    assert_eq!(coeffs(&s, 8), ints(&[1, -1, -1, 0, 1, 1, -1, 0, 0]));
    // (2; q)_2 = (1 - 2)(1 - 2q)
    let s = kp(&Monomial::constant(int(2)), exp(1, 1), 2, 1, 4).unwrap();
    assert_eq!(coeffs(&s, 4), ints(&[-1, 2, 0, 0, 0]));
    // (-1; q^2)_inf = 2 (1 + q^2)(1 + q^4)...; distinct even parts
    let s = poch_inf(&Monomial::constant(int(-1)), exp(2, 1), 1, 8).unwrap();
    assert_eq!(coeffs(&s, 8), ints(&[2, 0, 2, 0, 2, 0, 4, 0, 4]));
}

#[test]
fn jtp_at_minus_one_is_theta4() {
    // sum (-1)^n q^(n^2) = 1 - 2q + 2q^4 - 2q^9 + ...
    let s = jtp(&Monomial::constant(int(-1)), 1, 16).unwrap();
    let mut want = vec![0i64; 17];
    want[0] = 1;
    for n in 1..=4usize {
        want[n * n] = if n % 2 == 1 { -2 } else { 2 };
    }
    assert_eq!(coeffs(&s, 16), ints(&want));
}

#[test]
fn jtp_at_half_integer_argument() {
    let x = Monomial::new(rat(1, 2), exp(1, 2));
    let s = jtp(&x, 2, 20).unwrap();
    let oracle = bilateral(&x, 2, 20);
    for t in s.valuation_t().unwrap().min(0)..=40 {
        assert_eq!(s.coeff_t(t), oracle.get(&t).cloned().unwrap_or_default(), "t^{t}");
    }
}

#[test]
fn sqrt_pair_ratio_matches_its_pochhammer_form() {
    // (k q^2; q^2)_n / (k; q^2)_n telescopes to (1 - k q^(2n))/(1 - k)
    let b = ParamBinding::from([("k".to_string(), ParamValue::rational(rat(2, 5)))]);
    for n in 0..6i64 {
        let lhs = wpbailey::expr::sqrt_pair(p("k"), n);
        let rhs = poch(p("k") * q(2), 2, n) / poch(p("k"), 2, n);
        let (l, _) = eval_to_order(&lhs, &b, 1, 20, SumPolicy::default()).unwrap();
        let (r, _) = eval_to_order(&rhs, &b, 1, 20, SumPolicy::default()).unwrap();
        assert_eq!(l.first_difference_t(&r, 20), None, "n = {n}");
    }
}

#[test]
fn quad_ratio_at_k_two() {
    // (1 - q^n + 2 q^(2n))/2
    let s = quad_poch_ratio(&int(2), 3, 1, 8).unwrap();
    assert_eq!(coeffs(&s, 8), vec![rat(1, 2), int(0), int(0), rat(-1, 2), int(0), int(0), int(1), int(0), int(0)]);
}
