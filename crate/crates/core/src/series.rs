//! Truncated Laurent series in `t = q^(1/D)` with exact rational coefficients.
//!
//! A series stores every coefficient from its valuation up to `prec`, the
//! highest exponent (in `t`) it can vouch for. Everything above `prec` is
//! unknown. Products and quotients propagate `prec` with the Laurent rule, so
//! negative valuations never leak untrusted coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{exp_to_t, t_to_exp, Exp, QRational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("scale mismatch: 1/{0} vs 1/{1}")]
    ScaleMismatch(u32, u32),
    #[error("division by a series that vanishes to its trusted order")]
    DivisionByZero,
    #[error("exponent {exponent} is not a multiple of 1/{scale}")]
    NotRepresentable { exponent: Exp, scale: u32 },
    #[error("coefficient of q^{exponent} lies beyond trusted order {order}")]
    BeyondOrder { exponent: Exp, order: Exp },
}

/// Coefficients are kept as integer numerators over one shared positive
/// denominator, reduced so the numerators and denominator have no common
/// factor. Products and binomial steps then need integer arithmetic only,
/// with a single content reduction per operation.
#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    scale: u32,
    /// t-exponent of `nums[0]`; equals `prec + 1` for a series with no
    /// trusted nonzero coefficient.
    lo: i64,
    prec: i64,
    nums: Vec<BigInt>,
    den: BigInt,
}

fn split(c: &QRational) -> (BigInt, BigInt) {
    (c.numer().clone(), c.denom().clone())
}

impl QSeries {
    /// Zero, trusted through `t^prec`.
    pub fn zero_t(scale: u32, prec: i64) -> Self {
        assert!(scale > 0, "scale must be positive");
        QSeries { scale, lo: prec + 1, prec, nums: Vec::new(), den: BigInt::one() }
    }

    pub fn one_t(scale: u32, prec: i64) -> Self {
        Self::monomial_t(scale, QRational::one(), 0, prec)
    }

    /// `c * t^e`, trusted through `t^prec`.
    pub fn monomial_t(scale: u32, c: QRational, e: i64, prec: i64) -> Self {
        let mut s = Self::zero_t(scale, prec);
        if e <= prec && !c.is_zero() {
            let (n, d) = split(&c);
            let mut nums = vec![BigInt::zero(); (prec - e + 1) as usize];
            nums[0] = n;
            s.lo = e;
            s.nums = nums;
            s.den = d;
        }
        s
    }

    /// Builds a series from `(t-exponent, coefficient)` terms. Terms above
    /// `prec` are dropped; repeated exponents accumulate.
    pub fn from_terms_t(scale: u32, terms: &[(i64, QRational)], prec: i64) -> Self {
        let lo = terms.iter().map(|t| t.0).min().unwrap_or(prec + 1).min(prec + 1);
        let mut coeffs = vec![QRational::zero(); (prec - lo + 1).max(0) as usize];
        for (e, c) in terms {
            if *e <= prec {
                coeffs[(e - lo) as usize] += c;
            }
        }
        Self::from_rationals(scale, lo, prec, &coeffs)
    }

    fn from_rationals(scale: u32, lo: i64, prec: i64, coeffs: &[QRational]) -> Self {
        let den = coeffs.iter().fold(BigInt::one(), |d, c| d.lcm(c.denom()));
        let nums = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Self::from_dense(scale, lo, prec, nums, den)
    }

    /// Public constructor in q-units: `order` is the trusted q-order.
    pub fn one(scale: u32, order: i64) -> Self {
        Self::one_t(scale, order * scale as i64)
    }

    pub fn zero(scale: u32, order: i64) -> Self {
        Self::zero_t(scale, order * scale as i64)
    }

    pub fn monomial(scale: u32, c: QRational, e: Exp, order: i64) -> Result<Self, SeriesError> {
        let t = exp_to_t(e, scale).ok_or(SeriesError::NotRepresentable { exponent: e, scale })?;
        Ok(Self::monomial_t(scale, c, t, order * scale as i64))
    }

    fn from_dense(scale: u32, lo: i64, prec: i64, nums: Vec<BigInt>, den: BigInt) -> Self {
        let mut s = QSeries { scale, lo, prec, nums, den };
        s.normalize();
        s
    }

    /// Drops leading zeros and restores the reduced shared denominator.
    fn normalize(&mut self) {
        let lead = self.nums.iter().position(|c| !c.is_zero());
        match lead {
            Some(0) => {}
            Some(k) => {
                self.nums.drain(..k);
                self.lo += k as i64;
            }
            None => {
                self.nums.clear();
                self.lo = self.prec + 1;
                self.den = BigInt::one();
                return;
            }
        }
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for x in &mut self.nums {
                *x = -std::mem::take(x);
            }
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for x in &self.nums {
            if !x.is_zero() {
                g = g.gcd(x);
                if g.is_one() {
                    return;
                }
            }
        }
        self.den /= &g;
        for x in &mut self.nums {
            if !x.is_zero() {
                *x /= &g;
            }
        }
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// Highest trusted t-exponent.
    pub fn prec_t(&self) -> i64 {
        self.prec
    }

    /// Trusted order in q-units.
    pub fn order(&self) -> Exp {
        t_to_exp(self.prec, self.scale)
    }

    /// t-valuation, or `None` when nothing nonzero is trusted.
    pub fn valuation_t(&self) -> Option<i64> {
        (!self.nums.is_empty()).then_some(self.lo)
    }

    pub fn valuation(&self) -> Option<Exp> {
        self.valuation_t().map(|v| t_to_exp(v, self.scale))
    }

    /// Lowest exponent that might be nonzero: the valuation, or `prec + 1`.
    pub(crate) fn lo_t(&self) -> i64 {
        self.lo
    }

    pub fn is_zero(&self) -> bool {
        self.nums.is_empty()
    }

    fn num_t(&self, e: i64) -> Option<&BigInt> {
        if e < self.lo {
            None
        } else {
            self.nums.get((e - self.lo) as usize).filter(|x| !x.is_zero())
        }
    }

    /// Coefficient of `t^e`. Panics above the trusted order.
    pub fn coeff_t(&self, e: i64) -> QRational {
        assert!(e <= self.prec, "t^{e} is beyond trusted t^{}", self.prec);
        match self.num_t(e) {
            Some(n) => QRational::new(n.clone(), self.den.clone()),
            None => QRational::zero(),
        }
    }

    /// Coefficient of `q^r`.
    pub fn coeff(&self, r: Exp) -> Result<QRational, SeriesError> {
        let e = exp_to_t(r, self.scale)
            .ok_or(SeriesError::NotRepresentable { exponent: r, scale: self.scale })?;
        if e > self.prec {
            return Err(SeriesError::BeyondOrder { exponent: r, order: self.order() });
        }
        Ok(self.coeff_t(e))
    }

    /// Nonzero `(t-exponent, coefficient)` pairs in increasing order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, QRational)> + '_ {
        let lo = self.lo;
        self.nums
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (lo + i as i64, QRational::new(c.clone(), self.den.clone())))
    }

    /// Nonzero terms in q-units.
    pub fn q_terms(&self) -> Vec<(Exp, QRational)> {
        self.terms().map(|(e, c)| (t_to_exp(e, self.scale), c)).collect()
    }

    /// Forgets everything above `t^prec` (no-op if already coarser).
    pub fn truncate_t(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        let keep = (prec - self.lo + 1).max(0) as usize;
        let nums = self.nums.iter().take(keep).cloned().collect();
        Self::from_dense(self.scale, self.lo.min(prec + 1), prec, nums, self.den.clone())
    }

    fn check_scale(&self, other: &Self) -> Result<(), SeriesError> {
        if self.scale == other.scale {
            Ok(())
        } else {
            Err(SeriesError::ScaleMismatch(self.scale, other.scale))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_scale(other)?;
        let prec = self.prec.min(other.prec);
        let lo = self.lo.min(other.lo).min(prec + 1);
        let g = self.den.gcd(&other.den);
        let (fa, fb) = (&other.den / &g, &self.den / &g);
        let den = &self.den * &fa;
        let mut nums = vec![BigInt::zero(); (prec - lo + 1).max(0) as usize];
        for (s, f) in [(self, &fa), (other, &fb)] {
            for (i, c) in s.nums.iter().enumerate() {
                let e = s.lo + i as i64;
                if e > prec {
                    break;
                }
                if !c.is_zero() {
                    let slot = &mut nums[(e - lo) as usize];
                    if f.is_one() {
                        *slot += c;
                    } else {
                        *slot += c * f;
                    }
                }
            }
        }
        Ok(Self::from_dense(self.scale, lo, prec, nums, den))
    }

    pub fn neg(self) -> Self {
        let mut s = self;
        for c in &mut s.nums {
            *c = -std::mem::take(c);
        }
        s
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.clone().neg())
    }

    pub fn scale_by(self, c: &QRational) -> Self {
        if c.is_zero() {
            return Self::zero_t(self.scale, self.prec);
        }
        if c.is_one() {
            return self;
        }
        let (n, d) = split(c);
        let mut s = self;
        if !n.is_one() {
            for x in &mut s.nums {
                if !x.is_zero() {
                    *x *= &n;
                }
            }
        }
        s.den *= d;
        s.normalize();
        s
    }

    /// Multiplies by `t^m`; exact, so the trusted order moves with it.
    pub fn shift_t(self, m: i64) -> Self {
        let mut s = self;
        s.lo += m;
        s.prec += m;
        s
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_scale(other)?;
        let prec = (self.prec + other.lo).min(other.prec + self.lo);
        let lo = self.lo + other.lo;
        if self.is_zero() || other.is_zero() || lo > prec {
            return Ok(Self::zero_t(self.scale, prec));
        }
        let len = (prec - lo + 1) as usize;
        let mut nums = vec![BigInt::zero(); len];
        let a: Vec<(usize, &BigInt)> = self.nums.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        let b: Vec<(usize, &BigInt)> = other.nums.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for &(i, x) in &a {
            if i >= len {
                break;
            }
            for &(j, y) in &b {
                if i + j >= len {
                    break;
                }
                nums[i + j] += x * y;
            }
        }
        Ok(Self::from_dense(self.scale, lo, prec, nums, &self.den * &other.den))
    }

    /// Quotient by a series whose lowest trusted coefficient is nonzero.
    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_scale(other)?;
        if other.is_zero() {
            return Err(SeriesError::DivisionByZero);
        }
        let vb = other.lo;
        let prec = (self.prec - vb).min(other.prec - 2 * vb + self.lo);
        let lo = self.lo - vb;
        if self.is_zero() || lo > prec {
            return Ok(Self::zero_t(self.scale, prec));
        }
        let len = (prec - lo + 1) as usize;
        // A/B with integer numerators: r_i = x_i / b0^(i+1), where
        // x_i = b0^i a_i - sum_m b_m b0^(m-1) x_(i-m)
        let b0 = &other.nums[0];
        let mut pow = Vec::with_capacity(len + 1);
        pow.push(BigInt::one());
        for i in 0..len {
            let next = &pow[i] * b0;
            pow.push(next);
        }
        let b: Vec<(usize, &BigInt)> =
            other.nums.iter().enumerate().skip(1).filter(|(i, c)| *i < len && !c.is_zero()).collect();
        let mut x: Vec<BigInt> = Vec::with_capacity(len);
        for i in 0..len {
            let mut acc = match self.nums.get(i) {
                Some(a) if !a.is_zero() => a * &pow[i],
                _ => BigInt::zero(),
            };
            for &(m, bm) in &b {
                if m > i {
                    break;
                }
                let prev = &x[i - m];
                if !prev.is_zero() {
                    acc -= bm * prev * &pow[m - 1];
                }
            }
            x.push(acc);
        }
        // common denominator b0^len, then the outer factor den_b / den_a
        let nums = x.into_iter().enumerate().map(|(i, v)| v * &pow[len - 1 - i] * &other.den).collect();
        Ok(Self::from_dense(self.scale, lo, prec, nums, &pow[len] * &self.den))
    }

    pub fn invert(&self) -> Result<Self, SeriesError> {
        if self.is_zero() {
            return Err(SeriesError::DivisionByZero);
        }
        // enough headroom in the numerator that only `self` limits the result
        let head = (self.prec - self.lo).max(0);
        Self::one_t(self.scale, head).div(self)
    }

    /// Multiplies by `(1 - c t^m)`. Exact: no precision is lost.
    pub fn mul_binomial_t(self, c: &QRational, m: i64) -> Self {
        if c.is_zero() {
            return self;
        }
        if m == 0 {
            return self.scale_by(&(QRational::one() - c));
        }
        if m < 0 {
            // (1 - c t^m) = -c t^m (1 - t^{-m}/c)
            let inv = c.recip();
            return self.mul_binomial_t(&inv, -m).shift_t(m).scale_by(&-c.clone());
        }
        let mut s = self;
        let m = m as usize;
        if m >= s.nums.len() {
            return s;
        }
        let (cn, cd) = split(c);
        let unit_d = cd.is_one();
        for i in (0..s.nums.len()).rev() {
            if !unit_d && !s.nums[i].is_zero() {
                s.nums[i] *= &cd;
            }
            if i >= m && !s.nums[i - m].is_zero() {
                let d = &cn * &s.nums[i - m];
                s.nums[i] -= d;
            }
        }
        s.den *= cd;
        s.normalize();
        s
    }

    /// Divides by `(1 - c t^m)`.
    pub fn div_binomial_t(self, c: &QRational, m: i64) -> Result<Self, SeriesError> {
        if c.is_zero() {
            return Ok(self);
        }
        if m == 0 {
            let d = QRational::one() - c;
            if d.is_zero() {
                return Err(SeriesError::DivisionByZero);
            }
            return Ok(self.scale_by(&d.recip()));
        }
        if m < 0 {
            // 1/(1 - c t^m) = -(1/c) t^{-m} / (1 - t^{-m}/c)
            let inv = c.recip();
            return Ok(self.div_binomial_t(&inv, -m)?.shift_t(-m).scale_by(&-inv));
        }
        let mut s = self;
        let m = m as usize;
        let len = s.nums.len();
        if len == 0 {
            return Ok(s);
        }
        let (cn, cd) = split(c);
        if cd.is_one() {
            for i in m..len {
                if !s.nums[i - m].is_zero() {
                    let d = &cn * &s.nums[i - m];
                    s.nums[i] += d;
                }
            }
            s.normalize();
            return Ok(s);
        }
        // y_i carries denominator den * cd^(i/m)
        let top = (len - 1) / m;
        let mut pow = vec![BigInt::one()];
        for i in 0..top {
            let next = &pow[i] * &cd;
            pow.push(next);
        }
        for i in 0..len {
            let q = i / m;
            if q > 0 && !s.nums[i].is_zero() {
                s.nums[i] *= &pow[q];
            }
            if i >= m && !s.nums[i - m].is_zero() {
                let d = &cn * &s.nums[i - m];
                s.nums[i] += d;
            }
        }
        for i in 0..len {
            let q = i / m;
            if q < top && !s.nums[i].is_zero() {
                s.nums[i] *= &pow[top - q];
            }
        }
        s.den *= &pow[top];
        s.normalize();
        Ok(s)
    }

    /// Replaces `q` by `q^m` for a positive rational `m`, rescaling so every
    /// exponent stays representable.
    pub fn substitute_power(&self, m: Exp) -> Self {
        assert!(m > Exp::zero(), "substitute_power needs a positive exponent");
        let (u, v) = (*m.numer(), *m.denom());
        let d = self.scale as i64;
        let vd = v * d;
        let new_scale = vd / u.gcd(&vd);
        // old t^e = q^(e/d) -> q^(e u / (v d)) = t'^(e u new_scale / (v d))
        let factor = u * new_scale / vd;
        debug_assert_eq!(u * new_scale % vd, 0);
        self.spread(new_scale as u32, factor)
    }

    /// Re-expresses the series with denominator `scale`, which must be a
    /// multiple of the current one.
    pub fn with_scale(&self, scale: u32) -> Self {
        assert!(scale % self.scale == 0, "new scale must be a multiple of the old one");
        let f = (scale / self.scale) as i64;
        if f == 1 {
            return self.clone();
        }
        self.spread(scale, f)
    }

    /// `t^e -> t'^(e f)` at the new scale.
    fn spread(&self, scale: u32, f: i64) -> Self {
        let prec = self.prec * f + f - 1;
        if self.is_zero() {
            return Self::zero_t(scale, prec);
        }
        let lo = self.lo * f;
        let mut nums = vec![BigInt::zero(); (prec - lo + 1) as usize];
        for (i, c) in self.nums.iter().enumerate() {
            nums[i * f as usize] = c.clone();
        }
        Self::from_dense(scale, lo, prec, nums, self.den.clone())
    }

    /// First t-exponent at or below `upto` where the two series disagree.
    pub fn first_difference_t(&self, other: &Self, upto: i64) -> Option<i64> {
        assert!(upto <= self.prec.min(other.prec), "t^{upto} is beyond the trusted order");
        let zero = BigInt::zero();
        let lo = self.lo.min(other.lo);
        (lo..=upto).find(|&e| {
            let a = self.num_t(e).unwrap_or(&zero);
            let b = other.num_t(e).unwrap_or(&zero);
            if self.den == other.den {
                a != b
            } else {
                a * &other.den != b * &self.den
            }
        })
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let x = t_to_exp(e, self.scale);
            if x.is_zero() {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})*q^({x})")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^({}))", t_to_exp(self.prec + 1, self.scale))
    }
}
