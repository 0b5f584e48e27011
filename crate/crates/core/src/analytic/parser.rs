//! Recursive-descent parser for component expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' signed_int)*        right-associative
//! atom   := number | 'i' | 'z' | ident '(' expr ')' | '(' expr ')'
//! ident  := exp | sin | cos
//! ```
//!
//! Unary minus binds looser than `^`, so `-z^2` is `-(z^2)`.

use std::fmt;

use thiserror::Error;

use super::expr::{Expr, Func};
use crate::algebra::Complex;

/// Largest accepted magnitude of an integer exponent.
pub const MAX_EXPONENT: i64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: found {found}, expected one of {}", .expected.join(", "))]
pub struct ParseError {
    pub offset: usize,
    pub found: String,
    pub expected: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(x) => write!(f, "number {x}"),
            Tok::Int(k) => write!(f, "integer {k}"),
            Tok::Ident(s) => write!(f, "identifier '{s}'"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn err(offset: usize, found: impl Into<String>, expected: &[&str]) -> ParseError {
    ParseError {
        offset,
        found: found.into(),
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let tok = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => {
                let (tok, end) = lex_number(src, start)?;
                out.push((tok, start));
                i = end;
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(err(start, format!("character '{ch}'"), &["number", "'z'", "'i'", "'('", "operator"]));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

fn lex_number(src: &str, start: usize) -> Result<(Tok, usize), ParseError> {
    let bytes = src.as_bytes();
    let mut i = start;
    let digits = |i: &mut usize| {
        let s = *i;
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
        *i - s
    };
    let int_digits = digits(&mut i);
    let mut is_int = true;
    if i < bytes.len() && bytes[i] == b'.' {
        is_int = false;
        i += 1;
        let frac = digits(&mut i);
        if int_digits + frac == 0 {
            return Err(err(start, "'.'", &["digit"]));
        }
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        let exp_start = j;
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        if j == exp_start {
            return Err(err(j, "malformed exponent", &["digit"]));
        }
        is_int = false;
        i = j;
    }
    let text = &src[start..i];
    if is_int {
        if let Ok(k) = text.parse::<i64>() {
            return Ok((Tok::Int(k), i));
        }
    }
    let x: f64 = text.parse().map_err(|_| err(start, format!("'{text}'"), &["decimal literal"]))?;
    if !x.is_finite() {
        return Err(err(start, format!("'{text}' (overflows f64)"), &["finite decimal literal"]));
    }
    Ok((Tok::Num(x), i))
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

const ATOM_START: &[&str] = &["number", "'i'", "'z'", "'exp'", "'sin'", "'cos'", "'('", "'-'"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        err(self.offset(), self.peek().to_string(), expected)
    }

    fn expect(&mut self, want: Tok, label: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&[label]))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        let mut exps = Vec::new();
        while *self.peek() == Tok::Caret {
            self.bump();
            exps.push(self.signed_int()?);
        }
        let Some((&last, rest)) = exps.split_last() else {
            return Ok(base);
        };
        // z^a^b = z^(a^b)
        let mut k = last;
        for &(a, at) in rest.iter().rev() {
            k.0 = int_pow(a, k.0).ok_or_else(|| err(at, format!("exponent {a}^{}", k.0), &["integer exponent within range"]))?;
            k.1 = at;
        }
        if k.0.abs() > MAX_EXPONENT {
            return Err(err(k.1, format!("exponent {}", k.0), &["integer exponent with |k| <= 4096"]));
        }
        Ok(Expr::Pow(Box::new(base), k.0 as i32))
    }

    fn signed_int(&mut self) -> Result<(i64, usize), ParseError> {
        let at = self.offset();
        let sign = match self.peek() {
            Tok::Minus => {
                self.bump();
                -1
            }
            Tok::Plus => {
                self.bump();
                1
            }
            _ => 1,
        };
        match self.peek() {
            Tok::Int(k) => {
                let k = *k;
                self.bump();
                Ok((sign * k, at))
            }
            _ => Err(self.unexpected(&["integer exponent"])),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.bump() {
            Tok::Int(k) => Ok(Expr::real(k as f64)),
            Tok::Num(x) => Ok(Expr::real(x)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "z" => Ok(Expr::Var),
                "i" => Ok(Expr::Const(Complex::new(0.0, 1.0))),
                other => match Func::from_name(other) {
                    Some(f) => {
                        self.expect(Tok::LParen, "'('")?;
                        let arg = self.expr()?;
                        self.expect(Tok::RParen, "')'")?;
                        Ok(Expr::Call(f, Box::new(arg)))
                    }
                    None => Err(err(at, format!("identifier '{other}'"), ATOM_START)),
                },
            },
            tok => Err(err(at, tok.to_string(), ATOM_START)),
        }
    }
}

fn int_pow(base: i64, exp: i64) -> Option<i64> {
    if exp < 0 {
        return match base {
            1 => Some(1),
            -1 => Some(if exp % 2 == 0 { 1 } else { -1 }),
            _ => None,
        };
    }
    base.checked_pow(u32::try_from(exp).ok()?)
}

/// Parses an expression in one complex variable `z`.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected(&["'+'", "'-'", "'*'", "'/'", "'^'", "end of input"]));
    }
    Ok(e)
}
