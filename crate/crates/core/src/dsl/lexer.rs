use num_bigint::BigInt;

use super::{Diagnostic, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(BigInt),
    /// `p/q` written without spaces.
    Rat(BigInt, BigInt),
    /// Double-quoted name, for ids that are not identifiers.
    Str(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Semi,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Eq,
    NotEq,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Rat(n, d) => format!("`{n}/{d}`"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Eof => "end of input".into(),
            t => format!("`{}`", t.symbol()),
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Semi => ";",
            Tok::Comma => ",",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::Eq => "=",
            Tok::NotEq => "!=",
            _ => "",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

fn digits_end(b: &[u8], mut i: usize) -> usize {
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    i
}

pub fn lex(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let ch = b[i];
        if ch.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if ch == b'#' {
            while i < b.len() && b[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if ch.is_ascii_digit() {
            let end = digits_end(b, i);
            let num: BigInt = text[i..end].parse().unwrap();
            i = end;
            if i + 1 < b.len() && b[i] == b'/' && b[i + 1].is_ascii_digit() {
                let end = digits_end(b, i + 1);
                let den: BigInt = text[i + 1..end].parse().unwrap();
                if den == BigInt::from(0) {
                    return Err(Diagnostic::new("zero denominator", Span::new(text, start, end), vec![]));
                }
                i = end;
                Tok::Rat(num, den)
            } else {
                Tok::Int(num)
            }
        } else if ch == b'"' {
            let close = text[i + 1..].find(['"', '\n']).map(|k| i + 1 + k);
            match close {
                Some(e) if b[e] == b'"' => {
                    i = e + 1;
                    Tok::Str(text[start + 1..e].to_string())
                }
                _ => return Err(Diagnostic::new("unterminated string", Span::new(text, start, start + 1), vec![])),
            }
        } else if ch.is_ascii_alphabetic() || ch == b'_' {
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_' || b[i] == b'\'') {
                i += 1;
            }
            Tok::Ident(text[start..i].to_string())
        } else {
            i += 1;
            match ch {
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'{' => Tok::LBrace,
                b'}' => Tok::RBrace,
                b';' => Tok::Semi,
                b',' => Tok::Comma,
                b'+' => Tok::Plus,
                b'-' => Tok::Minus,
                b'*' => Tok::Star,
                b'/' => Tok::Slash,
                b'^' => Tok::Caret,
                b'=' => Tok::Eq,
                b'!' if b.get(i) == Some(&b'=') => {
                    i += 1;
                    Tok::NotEq
                }
                _ => {
                    let c = text[start..].chars().next().unwrap();
                    let end = start + c.len_utf8();
                    return Err(Diagnostic::new(
                        &format!("unexpected character `{c}`"),
                        Span::new(text, start, end),
                        vec![],
                    ));
                }
            }
        };
        out.push(Token { tok, span: Span::new(text, start, i) });
    }
    out.push(Token { tok: Tok::Eof, span: Span::new(text, b.len(), b.len()) });
    Ok(out)
}
