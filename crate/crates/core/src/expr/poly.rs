use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::Exp;

/// Summation variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    N,
    J,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::N => "n",
            Var::J => "j",
        }
    }
}

/// Polynomial of degree at most two in `n` and `j` with rational coefficients.
/// Slots: `1, n, j, n^2, n j, j^2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: [Exp; 6],
}

const ONE: usize = 0;
const N: usize = 1;
const J: usize = 2;
const NN: usize = 3;
const NJ: usize = 4;
const JJ: usize = 5;

impl Poly {
    pub fn constant(c: impl Into<Exp>) -> Self {
        let mut p = Poly::default();
        p.c[ONE] = c.into();
        p
    }

    pub fn var(v: Var) -> Self {
        let mut p = Poly::default();
        p.c[if v == Var::N { N } else { J }] = Exp::one();
        p
    }

    pub fn n() -> Self {
        Self::var(Var::N)
    }

    pub fn j() -> Self {
        Self::var(Var::J)
    }

    pub fn coeffs(&self) -> [Exp; 6] {
        self.c
    }

    pub fn degree(&self) -> u32 {
        if self.c[NN..].iter().any(|c| !c.is_zero()) {
            2
        } else if self.c[N] != Exp::zero() || self.c[J] != Exp::zero() {
            1
        } else {
            0
        }
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    pub fn constant_term(&self) -> Exp {
        self.c[ONE]
    }

    pub fn uses(&self, v: Var) -> bool {
        match v {
            Var::N => [N, NN, NJ].iter().any(|&i| !self.c[i].is_zero()),
            Var::J => [J, JJ, NJ].iter().any(|&i| !self.c[i].is_zero()),
        }
    }

    pub fn eval(&self, n: i64, j: i64) -> Exp {
        let (n, j) = (Exp::from_integer(n), Exp::from_integer(j));
        self.c[ONE] + self.c[N] * n + self.c[J] * j + self.c[NN] * n * n + self.c[NJ] * n * j
            + self.c[JJ] * j * j
    }

    pub fn scaled(&self, k: Exp) -> Self {
        let mut p = *self;
        for c in &mut p.c {
            *c *= k;
        }
        p
    }

    /// Product, or `None` if the degree would exceed two.
    pub fn checked_mul(&self, o: &Poly) -> Option<Poly> {
        if self.degree() + o.degree() > 2 {
            return None;
        }
        let a = &self.c;
        let b = &o.c;
        let mut r = Poly::default();
        r.c[ONE] = a[ONE] * b[ONE];
        r.c[N] = a[ONE] * b[N] + a[N] * b[ONE];
        r.c[J] = a[ONE] * b[J] + a[J] * b[ONE];
        r.c[NN] = a[ONE] * b[NN] + a[NN] * b[ONE] + a[N] * b[N];
        r.c[NJ] = a[ONE] * b[NJ] + a[NJ] * b[ONE] + a[N] * b[J] + a[J] * b[N];
        r.c[JJ] = a[ONE] * b[JJ] + a[JJ] * b[ONE] + a[J] * b[J];
        Some(r)
    }

    /// Substitutes polynomials for `n` and `j`; `None` if the result would
    /// exceed degree two.
    pub fn compose(&self, n: &Poly, j: &Poly) -> Option<Poly> {
        let terms = [
            (self.c[ONE], Poly::constant(1)),
            (self.c[N], *n),
            (self.c[J], *j),
            (self.c[NN], n.checked_mul(n)?),
            (self.c[NJ], n.checked_mul(j)?),
            (self.c[JJ], j.checked_mul(j)?),
        ];
        let mut r = Poly::default();
        for (k, p) in terms {
            if !k.is_zero() {
                r = r + p.scaled(k);
            }
        }
        Some(r)
    }

    /// Replaces a single variable.
    pub fn substitute(&self, v: Var, with: &Poly) -> Option<Poly> {
        match v {
            Var::N => self.compose(with, &Poly::j()),
            Var::J => self.compose(&Poly::n(), with),
        }
    }
}

impl From<i64> for Poly {
    fn from(c: i64) -> Self {
        Poly::constant(Exp::from_integer(c))
    }
}

impl From<Exp> for Poly {
    fn from(c: Exp) -> Self {
        Poly::constant(c)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, o: Poly) -> Poly {
        for (a, b) in self.c.iter_mut().zip(o.c) {
            *a += b;
        }
        self
    }
}

impl Add<i64> for Poly {
    type Output = Poly;
    fn add(self, o: i64) -> Poly {
        self + Poly::from(o)
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        self + (-o)
    }
}

impl Sub<i64> for Poly {
    type Output = Poly;
    fn sub(self, o: i64) -> Poly {
        self + Poly::from(-o)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scaled(-Exp::one())
    }
}

/// Panics above degree two; the parser uses [`Poly::checked_mul`].
impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        self.checked_mul(&o).expect("polynomial degree exceeds two")
    }
}

impl Mul<i64> for Poly {
    type Output = Poly;
    fn mul(self, k: i64) -> Poly {
        self.scaled(Exp::from_integer(k))
    }
}

impl Mul<Exp> for Poly {
    type Output = Poly;
    fn mul(self, k: Exp) -> Poly {
        self.scaled(k)
    }
}

impl Mul<Poly> for i64 {
    type Output = Poly;
    fn mul(self, p: Poly) -> Poly {
        p.scaled(Exp::from_integer(self))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Prints in the DSL's polynomial syntax, e.g. `n*n/2 - 3*n/2 + 1`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 6] = ["", "n", "j", "n*n", "n*j", "j*j"];
        let order = [NN, NJ, JJ, N, J, ONE];
        let mut first = true;
        for i in order {
            let c = self.c[i];
            if c.is_zero() {
                continue;
            }
            let neg = c < Exp::zero();
            let a = if neg { -c } else { c };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let (num, den) = (*a.numer(), *a.denom());
            if i == ONE {
                write!(f, "{num}")?;
            } else if num == 1 {
                write!(f, "{}", NAMES[i])?;
            } else {
                write!(f, "{num}*{}", NAMES[i])?;
            }
            if den != 1 {
                write!(f, "/{den}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
