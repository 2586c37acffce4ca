//! Prints expressions in the spec-language syntax. The output re-parses to a
//! structurally identical tree.

use std::fmt::{self, Display, Formatter, Write};

use num_traits::{One, Signed};

use super::{Poly, QExpr, Var};
use crate::rational::{Exp, QRational};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctx {
    Top,
    AddTerm,
    MulChild { first: bool },
    DivLeft,
    Atom,
}

fn is_plain(c: &QRational) -> bool {
    c.is_integer() && !c.is_negative()
}

fn needs_parens(e: &QExpr, ctx: Ctx) -> bool {
    match e {
        QExpr::Sum { .. } | QExpr::DoubleSum { .. } => ctx != Ctx::Top,
        QExpr::Add(_) => ctx != Ctx::Top,
        QExpr::Mul(_) => matches!(ctx, Ctx::MulChild { .. } | Ctx::Atom),
        QExpr::Div(..) => matches!(ctx, Ctx::MulChild { first: false } | Ctx::Atom),
        QExpr::Neg(_) => matches!(ctx, Ctx::MulChild { first: false } | Ctx::Atom),
        QExpr::Const(c) => !is_plain(c),
        _ => false,
    }
}

fn starts_with_digit(e: &QExpr) -> bool {
    match e {
        QExpr::Const(c) => is_plain(c),
        QExpr::Pow { base, .. } => matches!(&**base, QExpr::Const(c) if is_plain(c)),
        _ => false,
    }
}

fn write_rational(f: &mut impl Write, c: &QRational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

pub(super) fn write_step(f: &mut impl Write, s: Exp) -> fmt::Result {
    if s.is_integer() {
        write!(f, "{}", s.numer())
    } else {
        write!(f, "{}/{}", s.numer(), s.denom())
    }
}

fn write_in(f: &mut impl Write, e: &QExpr, ctx: Ctx) -> fmt::Result {
    if needs_parens(e, ctx) {
        f.write_char('(')?;
        write_bare(f, e)?;
        f.write_char(')')
    } else {
        write_bare(f, e)
    }
}

fn write_poly_exp(f: &mut impl Write, p: &Poly) -> fmt::Result {
    write!(f, "^({p})")
}

fn write_bare(f: &mut impl Write, e: &QExpr) -> fmt::Result {
    match e {
        QExpr::Const(c) => write_rational(f, c),
        QExpr::Param(name) => f.write_str(name),
        QExpr::QPow(p) => {
            f.write_char('q')?;
            if *p != Poly::constant(Exp::one()) {
                write_poly_exp(f, p)?;
            }
            Ok(())
        }
        QExpr::SignPow(p) => {
            f.write_str("(-1)")?;
            write_poly_exp(f, p)
        }
        QExpr::Pow { base, exp } => {
            let atomic = matches!(**base, QExpr::Param(_) | QExpr::QPow(_))
                || matches!(&**base, QExpr::Const(c) if is_plain(c));
            if atomic && !matches!(**base, QExpr::QPow(_)) {
                write_bare(f, base)?;
            } else {
                f.write_char('(')?;
                write_bare(f, base)?;
                f.write_char(')')?;
            }
            write_poly_exp(f, exp)
        }
        QExpr::Poch { arg, step, count } => {
            f.write_str("poch(")?;
            write_in(f, arg, Ctx::Top)?;
            f.write_str("; ")?;
            write_step(f, *step)?;
            write!(f, "; {count})")
        }
        QExpr::PochInf { arg, step } => {
            f.write_str("pochinf(")?;
            write_in(f, arg, Ctx::Top)?;
            f.write_str("; ")?;
            write_step(f, *step)?;
            f.write_char(')')
        }
        QExpr::QuadRatio { k, n } => {
            f.write_str("quadpair(")?;
            if **k != QExpr::Param("k".into()) {
                write_in(f, k, Ctx::Top)?;
                f.write_str("; ")?;
            }
            write!(f, "{n})")
        }
        QExpr::SqrtPairRatio { x, n } => {
            f.write_str("sqrtpair(")?;
            if **x != QExpr::Param("k".into()) {
                write_in(f, x, Ctx::Top)?;
                f.write_str("; ")?;
            }
            write!(f, "{n})")
        }
        QExpr::Add(v) => {
            for (i, t) in v.iter().enumerate() {
                if i == 0 {
                    write_in(f, t, Ctx::AddTerm)?;
                    continue;
                }
                match t {
                    QExpr::Neg(x) => {
                        f.write_str(" - ")?;
                        write_in(f, x, Ctx::AddTerm)?;
                    }
                    QExpr::Const(c) if c.is_negative() => {
                        f.write_str(" - ")?;
                        write_rational(f, &-c)?;
                    }
                    _ => {
                        f.write_str(" + ")?;
                        write_in(f, t, Ctx::AddTerm)?;
                    }
                }
            }
            Ok(())
        }
        QExpr::Mul(v) => {
            for (i, t) in v.iter().enumerate() {
                if i > 0 {
                    f.write_char('*')?;
                }
                write_in(f, t, Ctx::MulChild { first: i == 0 })?;
            }
            Ok(())
        }
        QExpr::Div(a, b) => {
            write_in(f, a, Ctx::DivLeft)?;
            f.write_char('/')?;
            // `3/2` would lex as one rational literal
            if starts_with_digit(b) {
                f.write_char('(')?;
                write_bare(f, b)?;
                f.write_char(')')
            } else {
                write_in(f, b, Ctx::Atom)
            }
        }
        QExpr::Neg(x) => {
            f.write_char('-')?;
            write_in(f, x, Ctx::Atom)
        }
        QExpr::CaseSplit { on, zero, nonzero } => {
            f.write_str("case0(")?;
            if *on != Poly::n() {
                write!(f, "{on}; ")?;
            }
            write_in(f, zero, Ctx::Top)?;
            f.write_str(", ")?;
            write_in(f, nonzero, Ctx::Top)?;
            f.write_char(')')
        }
        QExpr::Divides { modulus, of, body } => {
            write!(f, "ifdiv({modulus}; {of}; ")?;
            write_in(f, body, Ctx::Top)?;
            f.write_char(')')
        }
        QExpr::Sum { var, upper, body } => {
            write!(f, "sum({}", var.name())?;
            if let Some(u) = upper {
                write!(f, "; {u}")?;
            }
            f.write_str(") ")?;
            write_in(f, body, Ctx::Top)
        }
        QExpr::DoubleSum { body } => {
            write!(f, "sum({}, {}) ", Var::N.name(), Var::J.name())?;
            write_in(f, body, Ctx::Top)
        }
    }
}

impl Display for QExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_in(f, self, Ctx::Top)
    }
}
