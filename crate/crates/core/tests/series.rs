use std::collections::BTreeMap;

use num_traits::{One, Zero};
use proptest::prelude::*;
use wpbailey::rational::{exp, int, rat};
use wpbailey::{QRational, QSeries, SeriesError};

/// Naive Laurent polynomial product, used as an oracle.
fn naive_mul(a: &[(i64, i64)], b: &[(i64, i64)]) -> BTreeMap<i64, QRational> {
    let mut out = BTreeMap::new();
    for &(i, x) in a {
        for &(j, y) in b {
            *out.entry(i + j).or_insert_with(QRational::zero) += int(x * y);
        }
    }
    out
}

fn series(terms: &[(i64, i64)], prec: i64) -> QSeries {
    let t: Vec<(i64, QRational)> = terms.iter().map(|&(e, c)| (e, int(c))).collect();
    QSeries::from_terms_t(1, &t, prec)
}

fn laurent() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-4i64..12, -5i64..6), 1..6)
}

#[test]
fn mul_matches_naive_product() {
    let a = [(0, 1), (1, -2), (3, 5)];
    let b = [(-1, 3), (2, 1)];
    let prod = series(&a, 20).mul(&series(&b, 20)).unwrap();
    let oracle = naive_mul(&a, &b);
    for e in -1..=prod.prec_t() {
        assert_eq!(prod.coeff_t(e), oracle.get(&e).cloned().unwrap_or_default(), "t^{e}");
    }
}

#[test]
fn precision_follows_laurent_rule() {
    // q^-3 * (1 + O(q^10)) is only trusted through q^6
    let a = series(&[(-3, 1)], 10);
    let b = series(&[(0, 1), (4, 1)], 10);
    let p = a.mul(&b).unwrap();
    assert_eq!(p.prec_t(), 7);
    assert_eq!(p.valuation_t(), Some(-3));
}

#[test]
fn division_inverts_multiplication() {
    let a = series(&[(0, 2), (2, -1), (5, 3)], 15);
    let b = series(&[(1, 1), (2, 1)], 15);
    let q = a.mul(&b).unwrap().div(&b).unwrap();
    for e in 0..=q.prec_t().min(a.prec_t()) {
        assert_eq!(q.coeff_t(e), a.coeff_t(e));
    }
}

#[test]
fn division_by_zero_series_is_an_error() {
    let a = QSeries::one(1, 5);
    assert_eq!(a.div(&QSeries::zero(1, 5)), Err(SeriesError::DivisionByZero));
}

#[test]
fn inverse_of_one_minus_q_is_geometric() {
    let s = series(&[(0, 1), (1, -1)], 12).invert().unwrap();
    for e in 0..=12 {
        assert_eq!(s.coeff_t(e), QRational::one());
    }
}

#[test]
fn binomial_division_matches_geometric_series() {
    let s = QSeries::one(1, 10).div_binomial_t(&rat(1, 2), 2).unwrap();
    for e in 0..=10 {
        let expect = if e % 2 == 0 { rat(1, 1 << (e / 2)) } else { QRational::zero() };
        assert_eq!(s.coeff_t(e), expect);
    }
}

#[test]
fn negative_binomial_exponent_is_exact() {
    // (1 - 3 q^-2) then divided back
    let a = series(&[(0, 1), (1, 4)], 10);
    let b = a.clone().mul_binomial_t(&int(3), -2);
    assert_eq!(b.valuation_t(), Some(-2));
    assert_eq!(b.coeff_t(-2), int(-3));
    let c = b.div_binomial_t(&int(3), -2).unwrap();
    assert_eq!(c, a);
}

#[test]
fn coefficient_queries() {
    let s = QSeries::from_terms_t(2, &[(1, int(7))], 6);
    assert_eq!(s.coeff(exp(1, 2)).unwrap(), int(7));
    assert!(matches!(s.coeff(exp(1, 3)), Err(SeriesError::NotRepresentable { .. })));
    assert!(matches!(s.coeff(exp(4, 1)), Err(SeriesError::BeyondOrder { .. })));
    assert_eq!(s.order(), exp(3, 1));
}

#[test]
fn scale_mismatch_is_reported() {
    let a = QSeries::one(1, 3);
    let b = QSeries::one(2, 3);
    assert_eq!(a.add(&b), Err(SeriesError::ScaleMismatch(1, 2)));
}

#[test]
fn substitute_power_rescales() {
    // 1 + q + q^2 with q -> q^(1/2) lives at scale 2
    let s = series(&[(0, 1), (1, 1), (2, 1)], 4);
    let h = s.substitute_power(exp(1, 2));
    assert_eq!(h.scale(), 2);
    assert_eq!(h.coeff(exp(1, 2)).unwrap(), int(1));
    assert_eq!(h.order(), exp(2, 1));
    let back = h.substitute_power(exp(2, 1));
    assert_eq!(back.coeff_t(2), int(1));
    assert_eq!(back.scale(), 1);
}

proptest! {
    #[test]
    fn ring_laws(a in laurent(), b in laurent(), c in laurent()) {
        let (a, b, c) = (series(&a, 14), series(&b, 14), series(&c, 14));
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left.prec_t(), right.prec_t());
        prop_assert_eq!(left, right);
        let d1 = a.mul(&b.add(&c).unwrap()).unwrap();
        let d2 = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        let top = d1.prec_t().min(d2.prec_t());
        for e in -20..=top {
            prop_assert_eq!(d1.coeff_t(e), d2.coeff_t(e));
        }
    }

    #[test]
    fn product_agrees_with_naive_oracle(a in laurent(), b in laurent()) {
        let p = series(&a, 30).mul(&series(&b, 30)).unwrap();
        let oracle = naive_mul(&a, &b);
        for e in -8..=p.prec_t() {
            prop_assert_eq!(p.coeff_t(e), oracle.get(&e).cloned().unwrap_or_default());
        }
    }

    #[test]
    fn quotient_times_divisor(a in laurent(), b in laurent()) {
        let (a, b) = (series(&a, 20), series(&b, 20));
        prop_assume!(!b.is_zero());
        let back = a.div(&b).unwrap().mul(&b).unwrap();
        for e in -10..=back.prec_t() {
            prop_assert_eq!(back.coeff_t(e), a.coeff_t(e));
        }
    }

    #[test]
    fn binomial_ops_round_trip(a in laurent(), m in -6i64..7, cn in -3i64..4, cd in 1i64..4) {
        let c = rat(cn, cd);
        prop_assume!(!(m == 0 && c.is_one()));
        let a = series(&a, 16);
        let back = a.clone().mul_binomial_t(&c, m).div_binomial_t(&c, m).unwrap();
        prop_assert_eq!(back, a);
    }
}

proptest! {
    #[test]
    fn substitution_is_a_ring_map(a in laurent(), b in laurent(), m in prop::sample::select(vec![exp(1, 2), exp(2, 1), exp(3, 1)])) {
        let (a, b) = (series(&a, 12), series(&b, 12));
        let prod = a.mul(&b).unwrap().substitute_power(m);
        let each = a.substitute_power(m).mul(&b.substitute_power(m)).unwrap();
        prop_assert_eq!(prod.prec_t(), each.prec_t());
        prop_assert_eq!(prod, each);
        let sum = a.add(&b).unwrap().substitute_power(m);
        prop_assert_eq!(sum, a.substitute_power(m).add(&b.substitute_power(m)).unwrap());
    }

    #[test]
    fn inversion_is_an_involution(a in laurent()) {
        let a = series(&a, 15);
        prop_assume!(!a.is_zero());
        let back = a.invert().unwrap().invert().unwrap();
        for e in -10..=back.prec_t() {
            prop_assert_eq!(back.coeff_t(e), a.coeff_t(e));
        }
    }

    #[test]
    fn no_coefficient_beyond_precision(a in laurent(), b in laurent()) {
        let p = series(&a, 10).mul(&series(&b, 10)).unwrap();
        prop_assert!(p.terms().all(|(e, _)| e <= p.prec_t()));
        let q = series(&a, 10).div(&series(&b, 10));
        if let Ok(q) = q {
            prop_assert!(q.terms().all(|(e, _)| e <= q.prec_t()));
        }
    }
}
