use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use super::lexer::{lex, Tok, Token};
use super::{Diagnostic, IdentityDef, Item, PairDef, Span, SpecDocument};
use crate::expr::{Constraint, Poly, QExpr, Var};
use crate::rational::{Exp, QRational};

type PResult<T> = Result<T, Diagnostic>;

const FACTOR_START: &[&str] = &[
    "a number", "a parameter", "`q`", "`(`", "`poch`", "`pochinf`", "`sqrtpair`", "`quadpair`", "`case0`", "`ifdiv`",
    "`sum`",
];

struct Parser<'a> {
    text: &'a str,
    toks: Vec<Token>,
    pos: usize,
    scope: Vec<Var>,
}

pub fn parse_spec(text: &str) -> PResult<SpecDocument> {
    let toks = lex(text)?;
    let mut p = Parser { text, toks, pos: 0, scope: Vec::new() };
    let doc = p.document()?;
    doc.check_unique()?;
    Ok(doc)
}

/// Parses one expression; `vars` are the summation variables in scope.
pub fn parse_expr(text: &str, vars: &[Var]) -> PResult<QExpr> {
    let toks = lex(text)?;
    let mut p = Parser { text, toks, pos: 0, scope: vars.to_vec() };
    let e = p.expr()?;
    p.expect(&Tok::Eof)?;
    Ok(e)
}

fn big_to_i64(n: &BigInt, span: Span) -> PResult<i64> {
    n.to_i64().ok_or_else(|| Diagnostic::new("number too large here", span, vec![]))
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn prev_end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.toks[self.pos - 1].span.end
        }
    }

    fn span_from(&self, start: usize) -> Span {
        Span::new(self.text, start, self.prev_end().max(start))
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn at(&self, t: &Tok) -> bool {
        self.peek() == t
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: Vec<String>) -> Diagnostic {
        Diagnostic::new(&format!("unexpected {}", self.peek().describe()), self.span(), expected)
    }

    fn expect(&mut self, t: &Tok) -> PResult<Span> {
        if self.at(t) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(vec![t.describe()]))
        }
    }

    fn expect_word(&mut self, w: &str) -> PResult<Span> {
        if self.at_word(w) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(vec![format!("`{w}`")]))
        }
    }

    fn name(&mut self) -> PResult<(String, Span)> {
        match self.peek().clone() {
            Tok::Ident(s) | Tok::Str(s) => Ok((s, self.bump().span)),
            _ => Err(self.unexpected(vec!["a name".into()])),
        }
    }

    fn integer(&mut self) -> PResult<(i64, Span)> {
        let neg = self.eat(&Tok::Minus);
        match self.peek().clone() {
            Tok::Int(n) => {
                let span = self.bump().span;
                let v = big_to_i64(&n, span)?;
                Ok((if neg { -v } else { v }, span))
            }
            _ => Err(self.unexpected(vec!["an integer".into()])),
        }
    }

    fn rational(&mut self) -> PResult<(QRational, Span)> {
        let start = self.span().start;
        let neg = self.eat(&Tok::Minus);
        let r = match self.peek().clone() {
            Tok::Int(n) => QRational::from_integer(n),
            Tok::Rat(n, d) => QRational::new(n, d),
            _ => return Err(self.unexpected(vec!["a rational number".into()])),
        };
        self.bump();
        Ok((if neg { -r } else { r }, self.span_from(start)))
    }

    fn small_rational(&mut self) -> PResult<Exp> {
        let (r, span) = self.rational()?;
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Ok(Ratio::new(n, d)),
            _ => Err(Diagnostic::new("number too large here", span, vec![])),
        }
    }

    fn document(&mut self) -> PResult<SpecDocument> {
        let mut items = Vec::new();
        loop {
            if self.at_word("pair") {
                items.push(Item::Pair(self.pair()?));
            } else if self.at_word("identity") {
                items.push(Item::Identity(self.identity()?));
            } else if self.at(&Tok::Eof) {
                return Ok(SpecDocument { items });
            } else {
                return Err(self.unexpected(vec!["`pair`".into(), "`identity`".into()]));
            }
        }
    }

    fn statement_value<T>(&mut self, f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        self.expect(&Tok::Eq)?;
        let v = f(self)?;
        self.expect(&Tok::Semi)?;
        Ok(v)
    }

    fn scale(&mut self) -> PResult<u32> {
        self.bump();
        self.statement_value(|p| {
            let (v, span) = p.integer()?;
            u32::try_from(v).ok().filter(|s| *s > 0).ok_or_else(|| Diagnostic::new("scale must be a positive integer", span, vec![]))
        })
    }

    fn requires(&mut self) -> PResult<Vec<Constraint>> {
        let mut out = Vec::new();
        while self.at_word("require") {
            self.bump();
            let (param, _) = self.name()?;
            self.expect(&Tok::NotEq)?;
            let (v, _) = self.rational()?;
            self.expect(&Tok::Semi)?;
            out.push(Constraint::new(&param, v));
        }
        Ok(out)
    }

    fn indexed_head(&mut self, word: &str) -> PResult<()> {
        self.expect_word(word)?;
        self.expect(&Tok::LParen)?;
        self.expect_word("n")?;
        self.expect(&Tok::RParen)?;
        Ok(())
    }

    fn pair(&mut self) -> PResult<PairDef> {
        let start = self.bump().span.start;
        let (name, _) = self.name()?;
        self.expect(&Tok::LBrace)?;
        self.indexed_head("alpha")?;
        self.scope = vec![Var::N];
        let alpha = self.statement_value(|p| p.expr())?;
        let beta = if self.at_word("beta") {
            self.indexed_head("beta")?;
            Some(self.statement_value(|p| p.expr())?)
        } else {
            None
        };
        self.scope.clear();
        let a = if self.at_word("a") {
            self.bump();
            Some(self.statement_value(|p| p.expr())?)
        } else {
            None
        };
        let scale = if self.at_word("scale") { Some(self.scale()?) } else { None };
        let requires = self.requires()?;
        if !self.at(&Tok::RBrace) {
            let mut exp = vec!["`}`".to_string(), "`require`".to_string()];
            if scale.is_none() {
                exp.insert(0, "`scale`".into());
            }
            if a.is_none() && scale.is_none() {
                exp.insert(0, "`a`".into());
            }
            return Err(self.unexpected(exp));
        }
        self.bump();
        Ok(PairDef { name, alpha, beta, a, scale, requires, span: self.span_from(start) })
    }

    fn identity(&mut self) -> PResult<IdentityDef> {
        let start = self.bump().span.start;
        let (name, _) = self.name()?;
        self.expect(&Tok::LBrace)?;
        self.scope.clear();
        self.expect_word("lhs")?;
        let lhs = self.statement_value(|p| p.expr())?;
        self.expect_word("rhs")?;
        let rhs = self.statement_value(|p| p.expr())?;
        let order = if self.at_word("order") {
            self.bump();
            Some(self.statement_value(|p| {
                let (v, span) = p.integer()?;
                if v < 1 {
                    return Err(Diagnostic::new("order must be at least 1", span, vec![]));
                }
                Ok(v)
            })?)
        } else {
            None
        };
        let scale = if self.at_word("scale") { Some(self.scale()?) } else { None };
        let requires = self.requires()?;
        if !self.at(&Tok::RBrace) {
            let mut exp = vec!["`}`".to_string(), "`require`".to_string()];
            if scale.is_none() {
                exp.insert(0, "`scale`".into());
            }
            if order.is_none() && scale.is_none() {
                exp.insert(0, "`order`".into());
            }
            return Err(self.unexpected(exp));
        }
        self.bump();
        Ok(IdentityDef { name, lhs, rhs, order, scale, requires, span: self.span_from(start) })
    }

    fn expr(&mut self) -> PResult<QExpr> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = acc + self.term()?;
            } else if self.eat(&Tok::Minus) {
                acc = acc
                    + match self.term()? {
                        QExpr::Const(c) => QExpr::Const(-c),
                        t => -t,
                    };
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> PResult<QExpr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(&Tok::Star) {
                acc = acc * self.unary()?;
            } else if self.eat(&Tok::Slash) {
                acc = acc / self.unary()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> PResult<QExpr> {
        if self.eat(&Tok::Minus) {
            return Ok(match self.unary()? {
                QExpr::Const(c) => QExpr::Const(-c),
                x => -x,
            });
        }
        self.power()
    }

    fn power(&mut self) -> PResult<QExpr> {
        let bare_q = self.at_word("q");
        let parenthesized = self.at(&Tok::LParen);
        let base = self.factor()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let exp = if self.at(&Tok::LParen) {
            self.bump();
            let (p, _) = self.poly()?;
            self.expect(&Tok::RParen)?;
            p
        } else {
            let (n, _) = self.integer()?;
            Poly::from(n)
        };
        Ok(match base {
            QExpr::QPow(_) if bare_q => QExpr::QPow(exp),
            QExpr::Const(c) if parenthesized && c == -QRational::from_integer(1.into()) => QExpr::SignPow(exp),
            b => b.pow(exp),
        })
    }

    /// Position of a top-level `;` before the `)` closing the current call.
    fn semicolon_ahead(&self) -> bool {
        let mut depth = 0usize;
        for t in &self.toks[self.pos..] {
            match t.tok {
                Tok::LParen => depth += 1,
                Tok::RParen if depth == 0 => return false,
                Tok::RParen => depth -= 1,
                Tok::Semi if depth == 0 => return true,
                Tok::Eof => return false,
                _ => {}
            }
        }
        false
    }

    fn factor(&mut self) -> PResult<QExpr> {
        let t = self.peek().clone();
        let span = self.span();
        match t {
            Tok::Int(n) => {
                self.bump();
                Ok(QExpr::Const(QRational::from_integer(n)))
            }
            Tok::Rat(n, d) => {
                self.bump();
                Ok(QExpr::Const(QRational::new(n, d)))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(w) => match w.as_str() {
                "q" => {
                    self.bump();
                    Ok(QExpr::QPow(Poly::from(1)))
                }
                "n" | "j" => Err(Diagnostic::new(
                    &format!("summation variable `{w}` may only appear in exponents and counts"),
                    span,
                    vec![],
                )),
                "sum" => self.sum(),
                "poch" => {
                    self.bump();
                    self.expect(&Tok::LParen)?;
                    let arg = self.expr()?;
                    self.expect(&Tok::Semi)?;
                    let step = self.small_rational()?;
                    self.expect(&Tok::Semi)?;
                    let count = self.linear("poch count")?;
                    self.expect(&Tok::RParen)?;
                    Ok(crate::expr::poch(arg, step, count))
                }
                "pochinf" => {
                    self.bump();
                    self.expect(&Tok::LParen)?;
                    let arg = self.expr()?;
                    self.expect(&Tok::Semi)?;
                    let step_span = self.span();
                    let step = self.small_rational()?;
                    if step <= Exp::zero() {
                        return Err(Diagnostic::new("pochinf step must be positive", step_span, vec![]));
                    }
                    self.expect(&Tok::RParen)?;
                    Ok(crate::expr::poch_inf(arg, step))
                }
                "sqrtpair" | "quadpair" => {
                    self.bump();
                    self.expect(&Tok::LParen)?;
                    let arg = if self.semicolon_ahead() {
                        let a = self.expr()?;
                        self.expect(&Tok::Semi)?;
                        a
                    } else {
                        QExpr::Param("k".into())
                    };
                    let n = self.linear(&format!("{w} index"))?;
                    self.expect(&Tok::RParen)?;
                    Ok(if w == "sqrtpair" { crate::expr::sqrt_pair(arg, n) } else { crate::expr::quad(arg, n) })
                }
                "case0" => {
                    self.bump();
                    self.expect(&Tok::LParen)?;
                    let on = if self.semicolon_ahead() {
                        let (p, _) = self.poly()?;
                        self.expect(&Tok::Semi)?;
                        p
                    } else {
                        if !self.scope.contains(&Var::N) {
                            return Err(Diagnostic::new("`case0` without a selector needs `n` in scope", span, vec![]));
                        }
                        Poly::n()
                    };
                    let zero = self.expr()?;
                    self.expect(&Tok::Comma)?;
                    let nonzero = self.expr()?;
                    self.expect(&Tok::RParen)?;
                    Ok(crate::expr::case0(on, zero, nonzero))
                }
                "ifdiv" => {
                    self.bump();
                    self.expect(&Tok::LParen)?;
                    let (m, mspan) = self.integer()?;
                    if m < 1 {
                        return Err(Diagnostic::new("modulus must be positive", mspan, vec![]));
                    }
                    self.expect(&Tok::Semi)?;
                    let (of, _) = self.poly()?;
                    self.expect(&Tok::Semi)?;
                    let body = self.expr()?;
                    self.expect(&Tok::RParen)?;
                    Ok(crate::expr::divides(m, of, body))
                }
                _ => {
                    self.bump();
                    if self.at(&Tok::LParen) {
                        return Err(Diagnostic::new(&format!("unknown function `{w}`"), span, vec![]));
                    }
                    Ok(QExpr::Param(w))
                }
            },
            _ => Err(self.unexpected(FACTOR_START.iter().map(|s| s.to_string()).collect())),
        }
    }

    fn var(&mut self) -> PResult<Var> {
        if self.at_word("n") {
            self.bump();
            Ok(Var::N)
        } else if self.at_word("j") {
            self.bump();
            Ok(Var::J)
        } else {
            Err(self.unexpected(vec!["`n`".into(), "`j`".into()]))
        }
    }

    fn sum(&mut self) -> PResult<QExpr> {
        let start = self.bump().span;
        self.expect(&Tok::LParen)?;
        let v = self.var()?;
        let (vars, upper) = if self.eat(&Tok::Comma) {
            let w = self.var()?;
            if w == v {
                return Err(Diagnostic::new("a double sum needs two distinct variables", self.span_from(start.start), vec![]));
            }
            (vec![Var::N, Var::J], None)
        } else if self.eat(&Tok::Semi) {
            let (u, _) = self.poly()?;
            (vec![v], Some(u))
        } else {
            (vec![v], None)
        };
        self.expect(&Tok::RParen)?;
        for x in &vars {
            if self.scope.contains(x) {
                return Err(Diagnostic::new(
                    &format!("`{}` is already bound by an enclosing sum", x.name()),
                    self.span_from(start.start),
                    vec![],
                ));
            }
        }
        let saved = self.scope.clone();
        self.scope.extend(vars.iter().copied());
        let body = self.expr();
        self.scope = saved;
        let body = body?;
        Ok(match (vars.len(), upper) {
            (2, _) => crate::expr::double_sum(body),
            (_, Some(u)) => crate::expr::sum_to(v, u, body),
            _ => crate::expr::sum(v, body),
        })
    }

    fn linear(&mut self, what: &str) -> PResult<Poly> {
        let (p, span) = self.poly()?;
        if p.degree() > 1 {
            return Err(Diagnostic::new(&format!("{what} must be linear in n and j"), span, vec![]));
        }
        Ok(p)
    }

    fn poly(&mut self) -> PResult<(Poly, Span)> {
        let start = self.span().start;
        let mut acc = self.poly_term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = acc + self.poly_term()?;
            } else if self.eat(&Tok::Minus) {
                acc = acc - self.poly_term()?;
            } else {
                return Ok((acc, self.span_from(start)));
            }
        }
    }

    fn poly_term(&mut self) -> PResult<Poly> {
        let start = self.span().start;
        let mut acc = self.poly_unary()?;
        loop {
            if self.eat(&Tok::Star) {
                let r = self.poly_unary()?;
                acc = acc
                    .checked_mul(&r)
                    .ok_or_else(|| Diagnostic::new("exponent is more than quadratic", self.span_from(start), vec![]))?;
            } else if self.at(&Tok::Slash) {
                self.bump();
                let dspan = self.span();
                let d = self.poly_unary()?;
                if !d.is_constant() || d.constant_term().is_zero() {
                    return Err(Diagnostic::new("can only divide by a nonzero number here", self.span_from(dspan.start), vec![]));
                }
                acc = acc.scaled(d.constant_term().recip());
            } else {
                return Ok(acc);
            }
        }
    }

    fn poly_unary(&mut self) -> PResult<Poly> {
        if self.eat(&Tok::Minus) {
            return Ok(-self.poly_unary()?);
        }
        let start = self.span().start;
        let base = self.poly_atom()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let (k, kspan) = self.integer()?;
        if k < 0 {
            return Err(Diagnostic::new("negative power in an exponent", kspan, vec![]));
        }
        let mut acc = Poly::from(1);
        for _ in 0..k {
            acc = acc
                .checked_mul(&base)
                .ok_or_else(|| Diagnostic::new("exponent is more than quadratic", self.span_from(start), vec![]))?;
        }
        Ok(acc)
    }

    fn poly_atom(&mut self) -> PResult<Poly> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Int(_) | Tok::Rat(..) => Ok(Poly::constant(self.small_rational()?)),
            Tok::Ident(w) if w == "n" || w == "j" => {
                let v = if w == "n" { Var::N } else { Var::J };
                if !self.scope.contains(&v) {
                    return Err(Diagnostic::new(&format!("variable `{w}` is not bound here"), span, vec![]));
                }
                self.bump();
                Ok(Poly::var(v))
            }
            Tok::LParen => {
                self.bump();
                let (p, _) = self.poly()?;
                self.expect(&Tok::RParen)?;
                Ok(p)
            }
            _ => Err(self.unexpected(vec!["a number".into(), "`n`".into(), "`j`".into(), "`(`".into()])),
        }
    }
}
