//! Expression grammar for forms and polynomial map coordinates:
//! integer and `num/den` literals, variables `X0..XN` or `z`, the operators
//! `+ - * ^` (nonnegative integer exponents) and parentheses.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::poly::{MonomialOrder, Poly};
use crate::scalar::Scalar;

const MAX_EXPONENT: u32 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variables {
    /// `X0, …, X{n-1}`.
    Projective(usize),
    /// The single series variable `z`.
    Series,
}

impl Variables {
    fn nvars(&self) -> usize {
        match self {
            Variables::Projective(n) => *n,
            Variables::Series => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Open,
    Close,
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    vars: Variables,
    field: &'a str,
}

fn err(field: &str, at: usize, message: impl Into<String>) -> Error {
    Error::Parse { field: field.to_string(), message: format!("column {}: {}", at + 1, message.into()) }
}

fn lex(src: &str, vars: Variables, field: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = vec![];
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((start, Tok::Plus)),
            '-' | '−' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '^' => out.push((start, Tok::Caret)),
            '/' => out.push((start, Tok::Slash)),
            '(' => out.push((start, Tok::Open)),
            ')' => out.push((start, Tok::Close)),
            '0'..='9' => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((start, Tok::Int(s.parse().unwrap())));
                continue;
            }
            'X' | 'x' if matches!(vars, Variables::Projective(_)) => {
                i += 1;
                let ds = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[ds..i].iter().collect();
                let idx: usize = s.parse().map_err(|_| err(field, start, "expected a variable index after X"))?;
                if idx >= vars.nvars() {
                    return Err(err(field, start, format!("variable X{idx} is out of range (X0..X{})", vars.nvars() - 1)));
                }
                out.push((start, Tok::Var(idx)));
                continue;
            }
            'z' if vars == Variables::Series => out.push((start, Tok::Var(0))),
            other => return Err(err(field, start, format!("unexpected character '{other}'"))),
        }
        i += 1;
    }
    Ok(out)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn at(&self) -> usize {
        self.toks.get(self.pos).map_or_else(|| self.toks.last().map_or(0, |(p, _)| p + 1), |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn zero(&self) -> Poly {
        Poly::zero(self.vars.nvars(), MonomialOrder::Grevlex)
    }

    fn constant(&self, c: Scalar) -> Poly {
        Poly::constant(self.vars.nvars(), MonomialOrder::Grevlex, c)
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(self.zero().sub(&self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let at = self.at();
        match self.bump() {
            Some(Tok::Int(e)) => {
                let e = e
                    .to_u32()
                    .filter(|e| *e <= MAX_EXPONENT)
                    .ok_or_else(|| err(self.field, at, format!("exponent exceeds {MAX_EXPONENT}")))?;
                Ok(base.pow(e))
            }
            _ => Err(err(self.field, at, "expected a nonnegative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let at = self.at();
        match self.bump() {
            Some(Tok::Int(n)) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    let at = self.at();
                    match self.bump() {
                        Some(Tok::Int(d)) if d != BigInt::from(0) => Ok(self.constant(Scalar::new(n, d))),
                        Some(Tok::Int(_)) => Err(err(self.field, at, "zero denominator")),
                        _ => Err(err(self.field, at, "'/' is only allowed inside a num/den literal")),
                    }
                } else {
                    Ok(self.constant(Scalar::from_integer(n)))
                }
            }
            Some(Tok::Var(i)) => Ok(Poly::var(self.vars.nvars(), MonomialOrder::Grevlex, i)),
            Some(Tok::Open) => {
                let inner = self.expr()?;
                let at = self.at();
                match self.bump() {
                    Some(Tok::Close) => Ok(inner),
                    _ => Err(err(self.field, at, "expected ')'")),
                }
            }
            Some(_) => Err(err(self.field, at, "expected a number, variable or '('")),
            None => Err(err(self.field, at, "unexpected end of expression")),
        }
    }
}

/// Parses an expression into a polynomial in the given variables.
pub fn parse_poly(src: &str, vars: Variables, field: &str) -> Result<Poly> {
    let toks = lex(src, vars, field)?;
    if toks.is_empty() {
        return Err(err(field, 0, "empty expression"));
    }
    let mut p = Parser { toks, pos: 0, vars, field };
    let out = p.expr()?;
    if p.pos < p.toks.len() {
        let at = p.at();
        return Err(err(field, at, "unexpected trailing input"));
    }
    Ok(out)
}

/// Dense coefficients of a polynomial in `z`.
pub fn parse_z_poly(src: &str, field: &str) -> Result<Vec<Scalar>> {
    Ok(parse_poly(src, Variables::Series, field)?.as_univariate(0).unwrap())
}

/// Renders dense `z`-coefficients in the same grammar.
pub fn format_z_poly(coeffs: &[Scalar]) -> String {
    let p = Poly::from_univariate(1, MonomialOrder::Grevlex, 0, coeffs);
    if p.is_zero() {
        return "0".into();
    }
    p.display_with(&|_| "z".to_string())
}

pub fn format_form(p: &Poly) -> String {
    p.to_string()
}
