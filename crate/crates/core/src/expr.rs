//! Recursive-descent parser for integer polynomial expressions.
//!
//! Grammar: integer literals, identifiers (optionally indexed, `x[0][1]`),
//! `+ - * ^` and parentheses. Exponents are nonnegative integer literals.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::{MultiPoly, Vars};
use crate::ring::{Integers, Ring};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |col: usize, reason: String| Error::Parse { column: col + 1, reason };
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            ' ' | '\t' => {
                i += 1;
                continue;
            }
            '+' => out.push((start, Tok::Plus)),
            '-' | '\u{2212}' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '^' => out.push((start, Tok::Caret)),
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            d if d.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((start, Tok::Int(s.parse().expect("digits"))));
                continue;
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let mut name: String = chars[start..i].iter().collect();
                // bracketed indices, whitespace inside brackets is dropped
                loop {
                    let mut j = i;
                    while j < chars.len() && chars[j] == ' ' {
                        j += 1;
                    }
                    if j >= chars.len() || chars[j] != '[' {
                        break;
                    }
                    let close = chars[j..]
                        .iter()
                        .position(|&c| c == ']')
                        .ok_or_else(|| err(j, "unclosed `[`".into()))?;
                    let inner: String = chars[j + 1..j + close].iter().filter(|c| !c.is_whitespace()).collect();
                    if inner.is_empty() || !inner.chars().all(|c| c.is_ascii_digit()) {
                        return Err(err(j, format!("bad index `[{inner}]`")));
                    }
                    let idx: u64 = inner.parse().map_err(|_| err(j, "index too large".into()))?;
                    name.push_str(&format!("[{idx}]"));
                    i = j + close + 1;
                }
                out.push((start, Tok::Ident(name)));
                continue;
            }
            other => return Err(err(start, format!("unexpected character `{other}`"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    vars: &'a Vars,
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |(c, _)| *c) + 1
    }

    fn fail<T>(&self, reason: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            column: self.column(),
            reason: reason.into(),
        })
    }

    fn expr(&mut self) -> Result<MultiPoly<BigInt>> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t, &Integers);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t, &Integers);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly<BigInt>> {
        let mut acc = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            let f = self.unary()?;
            acc = acc.mul(&f, &Integers);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly<BigInt>> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(self.unary()?.neg(&Integers))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly<BigInt>> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Int(e)) => {
                    let e: u32 = match u32::try_from(&e) {
                        Ok(e) if e <= 1 << 16 => e,
                        _ => return self.fail(format!("exponent {e} is too large")),
                    };
                    self.pos += 1;
                    Ok(base.pow(e as u64, &Integers))
                }
                _ => self.fail("expected a nonnegative integer exponent after `^`"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MultiPoly<BigInt>> {
        match self.peek().cloned() {
            Some(Tok::Int(c)) => {
                self.pos += 1;
                Ok(MultiPoly::constant(self.vars.clone(), c, &Integers))
            }
            Some(Tok::Ident(name)) => match self.vars.index_of(&name) {
                Some(idx) => {
                    self.pos += 1;
                    Ok(MultiPoly::var(self.vars.clone(), idx, &Integers))
                }
                None => self.fail(format!("unknown variable `{name}`")),
            },
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.fail("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(t) => self.fail(format!("unexpected token {t:?}")),
            None => self.fail("unexpected end of expression"),
        }
    }
}

/// Parses `text` as an integer polynomial in `vars`.
pub fn parse_poly(text: &str, vars: &Vars) -> Result<MultiPoly<BigInt>> {
    let toks = tokenize(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        vars,
        len: text.chars().count(),
    };
    let poly = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return parser.fail("trailing input");
    }
    Ok(poly)
}

/// Parses an expression and maps its integer coefficients into `ring`.
pub fn parse_poly_in<R: Ring>(text: &str, vars: &Vars, ring: &R) -> Result<MultiPoly<R::Elem>> {
    Ok(parse_poly(text, vars)?.map_coeffs(ring, |c| ring.from_int(c)))
}
