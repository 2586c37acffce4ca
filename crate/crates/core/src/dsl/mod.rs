//! Text format for user-defined pairs and identities.
//!
//! ```text
//! pair h6 {
//!     alpha(n) = case0(1, 0);
//!     beta(n) = poch(k; 1; n)*poch(k; 1; n)/(poch(q; 1; n)*poch(q; 1; n));
//!     a = 1;
//!     require k != 1;
//! }
//! identity rr1 {
//!     lhs = sum(n) q^(n^2)/poch(q; 1; n);
//!     rhs = 1/(pochinf(q; 5)*pochinf(q^(4); 5));
//! }
//! ```

mod lexer;
mod parser;

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::expr::{p, q, Constraint, ParamBinding, ParamValue, QExpr, Subst};
use crate::pairs::{PairKind, PairSpec};
use crate::verify::IdentityCase;

pub use parser::{parse_expr, parse_spec};

/// Byte range plus the 1-based line and column of its start.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl Span {
    pub fn new(text: &str, start: usize, end: usize) -> Span {
        let before = &text[..start];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Span { start, end, line, column }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct Diagnostic {
    pub message: String,
    pub span: Span,
    pub expected: Vec<String>,
}

impl Diagnostic {
    pub fn new(message: &str, span: Span, expected: Vec<String>) -> Self {
        Diagnostic { message: message.to_string(), span, expected }
    }

    /// The message with the offending source line and a caret underline.
    pub fn render(&self, text: &str) -> String {
        let line = text.lines().nth(self.span.line - 1).unwrap_or("");
        let width = text[self.span.start..self.span.end.min(text.len())].chars().count().max(1);
        format!("{self}\n  | {line}\n  | {}{}", " ".repeat(self.span.column - 1), "^".repeat(width))
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.span.line, self.span.column, self.message)?;
        match self.expected.len() {
            0 => Ok(()),
            1 => write!(f, "; expected {}", self.expected[0]),
            _ => write!(f, "; expected one of {}", self.expected.join(", ")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PairDef {
    pub name: String,
    pub alpha: QExpr,
    pub beta: Option<QExpr>,
    /// `None` leaves `a` free.
    pub a: Option<QExpr>,
    pub scale: Option<u32>,
    pub requires: Vec<Constraint>,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct IdentityDef {
    pub name: String,
    pub lhs: QExpr,
    pub rhs: QExpr,
    pub order: Option<i64>,
    pub scale: Option<u32>,
    pub requires: Vec<Constraint>,
    pub span: Span,
}

// spans are positional, so equality compares structure only

impl PartialEq for PairDef {
    fn eq(&self, o: &Self) -> bool {
        (&self.name, &self.alpha, &self.beta, &self.a, self.scale, &self.requires)
            == (&o.name, &o.alpha, &o.beta, &o.a, o.scale, &o.requires)
    }
}

impl PartialEq for IdentityDef {
    fn eq(&self, o: &Self) -> bool {
        (&self.name, &self.lhs, &self.rhs, self.order, self.scale, &self.requires)
            == (&o.name, &o.lhs, &o.rhs, o.order, o.scale, &o.requires)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Pair(PairDef),
    Identity(IdentityDef),
}

impl Item {
    pub fn name(&self) -> &str {
        match self {
            Item::Pair(p) => &p.name,
            Item::Identity(i) => &i.name,
        }
    }

    fn span(&self) -> Span {
        match self {
            Item::Pair(p) => p.span,
            Item::Identity(i) => i.span,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpecDocument {
    pub items: Vec<Item>,
}

impl SpecDocument {
    fn check_unique(&self) -> Result<(), Diagnostic> {
        let mut seen = std::collections::BTreeSet::new();
        for it in &self.items {
            if !seen.insert(it.name()) {
                return Err(Diagnostic::new(&format!("`{}` is defined twice", it.name()), it.span(), vec![]));
            }
        }
        Ok(())
    }

    pub fn pairs(&self) -> impl Iterator<Item = &PairDef> {
        self.items.iter().filter_map(|i| match i {
            Item::Pair(p) => Some(p),
            _ => None,
        })
    }

    pub fn identities(&self) -> impl Iterator<Item = &IdentityDef> {
        self.items.iter().filter_map(|i| match i {
            Item::Identity(d) => Some(d),
            _ => None,
        })
    }

    pub fn get(&self, name: &str) -> Option<&Item> {
        self.items.iter().find(|i| i.name() == name)
    }
}

impl PairDef {
    pub fn to_pair(&self) -> PairSpec {
        let a = self.a.clone().unwrap_or_else(|| p("a"));
        let mut pr = PairSpec::new(&self.name, PairKind::Wp, self.alpha.clone(), self.beta.clone(), a)
            .describe("user-defined WP-Bailey pair");
        if let Some(s) = self.scale {
            pr = pr.with_scale(s);
        }
        for c in &self.requires {
            pr = pr.require(c.clone());
        }
        pr
    }
}

impl IdentityDef {
    pub fn to_case(&self) -> IdentityCase {
        let mut c = IdentityCase::new(&self.name, "user-defined identity", self.lhs.clone(), self.rhs.clone());
        if let Some(s) = self.scale {
            c = c.with_scale(s);
        }
        if let Some(o) = self.order {
            c = c.with_order(o);
        }
        for r in &self.requires {
            c = c.require(r.clone());
        }
        c
    }

    /// The definition of a catalog case, with its fixed parameters written in.
    pub fn from_case(c: &IdentityCase) -> IdentityDef {
        let sub = fixed_subst(&c.fixed);
        let apply = |e: &QExpr| sub.apply(e).unwrap_or_else(|_| e.clone());
        IdentityDef {
            name: c.id.clone(),
            lhs: apply(&c.lhs),
            rhs: apply(&c.rhs),
            order: c.default_order,
            scale: (c.scale != 1).then_some(c.scale),
            requires: c.constraints.clone(),
            span: Span { start: 0, end: 0, line: 1, column: 1 },
        }
    }
}

fn fixed_subst(b: &ParamBinding) -> Subst {
    let mut s = Subst::default();
    for (name, v) in b {
        if let ParamValue::Value(m) = v {
            let c = QExpr::Const(m.coeff.clone());
            let e = if m.exp.is_zero() { c } else { c * q(crate::expr::Poly::constant(m.exp)) };
            s = s.and_param(name, e);
        }
    }
    s
}

fn is_ident(s: &str) -> bool {
    let mut ch = s.chars();
    matches!(ch.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && ch.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

struct Name<'a>(&'a str);

impl fmt::Display for Name<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if is_ident(self.0) {
            f.write_str(self.0)
        } else {
            write!(f, "\"{}\"", self.0)
        }
    }
}

impl fmt::Display for PairDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pair {} {{", Name(&self.name))?;
        writeln!(f, "    alpha(n) = {};", self.alpha)?;
        if let Some(b) = &self.beta {
            writeln!(f, "    beta(n) = {b};")?;
        }
        if let Some(a) = &self.a {
            writeln!(f, "    a = {a};")?;
        }
        if let Some(s) = self.scale {
            writeln!(f, "    scale = {s};")?;
        }
        for c in &self.requires {
            writeln!(f, "    require {c};")?;
        }
        writeln!(f, "}}")
    }
}

impl fmt::Display for IdentityDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "identity {} {{", Name(&self.name))?;
        writeln!(f, "    lhs = {};", self.lhs)?;
        writeln!(f, "    rhs = {};", self.rhs)?;
        if let Some(o) = self.order {
            writeln!(f, "    order = {o};")?;
        }
        if let Some(s) = self.scale {
            writeln!(f, "    scale = {s};")?;
        }
        for c in &self.requires {
            writeln!(f, "    require {c};")?;
        }
        writeln!(f, "}}")
    }
}

impl fmt::Display for SpecDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, it) in self.items.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            match it {
                Item::Pair(p) => write!(f, "{p}")?,
                Item::Identity(d) => write!(f, "{d}")?,
            }
        }
        Ok(())
    }
}
