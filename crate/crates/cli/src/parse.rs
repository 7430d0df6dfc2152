//! Polynomial expressions in `x` and `y`.
//!
//! ```text
//! expr  := term (("+" | "-") term)*
//! term  := unary ("*" unary)*
//! unary := ("+" | "-") unary | power
//! power := atom ("^" digits)?
//! atom  := digits | "x" | "y" | "(" expr ")"
//! ```

use algcoeff::arith::{BiPoly, PrimeField};
use thiserror::Error;

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u64 = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("parse error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("nonconforming exponent at position {pos}: {text}")]
    NonconformingExponent { pos: usize, text: String },
}

impl ParseError {
    pub fn pos(&self) -> usize {
        match self {
            Self::Syntax { pos, .. } | Self::NonconformingExponent { pos, .. } => *pos,
        }
    }
}

type PResult<T> = std::result::Result<T, ParseError>;

pub fn parse_poly(text: &str, field: PrimeField) -> PResult<BiPoly> {
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
        field,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos < p.s.len() {
        return Err(p.err(format!("unexpected '{}'", p.s[p.pos] as char)));
    }
    Ok(v)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    field: PrimeField,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> PResult<BiPoly> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == b'+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> PResult<BiPoly> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> PResult<BiPoly> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> PResult<BiPoly> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        let digits = self.take_digits();
        if digits.is_empty() {
            let rest: String = self.s[start..]
                .iter()
                .take_while(|c| !c.is_ascii_whitespace())
                .map(|&c| c as char)
                .collect();
            if rest.starts_with('-') || rest.starts_with('(') {
                return Err(ParseError::NonconformingExponent { pos: start, text: rest });
            }
            return Err(self.err("expected an exponent"));
        }
        match digits.parse::<u64>() {
            Ok(e) if e <= MAX_EXPONENT => Ok(base.pow(e)),
            _ => Err(ParseError::NonconformingExponent {
                pos: start,
                text: digits,
            }),
        }
    }

    fn take_digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> PResult<BiPoly> {
        let f = self.field;
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(BiPoly::from_terms(f, &[(1, 0, 1)]))
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(BiPoly::from_terms(f, &[(0, 1, 1)]))
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.take_digits();
                let v = digits
                    .bytes()
                    .fold(0u64, |acc, d| f.add(f.mul(acc, 10 % f.modulus()), (d - b'0') as u64 % f.modulus()));
                Ok(BiPoly::from_grid(f, 1, 1, vec![v]))
            }
            Some(c) => Err(self.err(format!("unexpected '{}'", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}
