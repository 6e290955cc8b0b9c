//! Text grammar for polynomials.
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { "*" unary } ;
//! unary   = "-" unary | power ;
//! power   = atom [ "^" integer ] ;
//! atom    = number | variable | "(" expr ")" ;
//! number  = integer [ "/" integer ] ;
//! variable = "t0" | "t1" | "x0" | "x1" | "x2" | "x3" | "x4" ;
//! ```
//!
//! A slash is only legal between two integer literals; any other division is
//! rejected. Whitespace is insignificant. Homogeneity is not checked here.

use alloc::string::{String, ToString};

use num_bigint::BigInt;
use thiserror::Error;

use super::{Monomial, Polynomial, AMBIENT_VARS, T0, T1, X0};
use crate::scalar::{FieldMode, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedEnd,
    UnknownVariable(String),
    DivisionAttempted,
    BadExponent,
    ZeroDenominator,
    TrailingInput,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind:?} at byte {position}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: usize,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    mode: FieldMode,
}

/// Parse `src` into a canonical polynomial over `mode`.
pub fn parse(src: &str, mode: FieldMode) -> Result<Polynomial, ParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        mode,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err(ParseErrorKind::TrailingInput));
    }
    Ok(e)
}

impl Parser<'_> {
    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            kind,
            position: self.pos,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(b'/') => return Err(self.err(ParseErrorKind::DivisionAttempted)),
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(ParseError {
                    kind: ParseErrorKind::BadExponent,
                    position: start,
                });
            }
            let e: u32 = digits.parse().map_err(|_| ParseError {
                kind: ParseErrorKind::BadExponent,
                position: start,
            })?;
            if e == 0 {
                return Ok(Polynomial::one(self.mode));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        core::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .to_string()
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek() {
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(match self.peek() {
                        None => self.err(ParseErrorKind::UnexpectedEnd),
                        Some(c) => self.err(ParseErrorKind::UnexpectedChar(c as char)),
                    });
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().parse().unwrap();
                if self.peek() == Some(b'/') {
                    let slash = self.pos;
                    self.pos += 1;
                    if !matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
                        return Err(ParseError {
                            kind: ParseErrorKind::DivisionAttempted,
                            position: slash,
                        });
                    }
                    let den: BigInt = self.digits().parse().unwrap();
                    let s = Scalar::from_ratio(self.mode, &num, &den).map_err(|_| ParseError {
                        kind: ParseErrorKind::ZeroDenominator,
                        position: slash,
                    })?;
                    return Ok(Polynomial::constant(s));
                }
                Ok(Polynomial::constant(Scalar::from_bigint(self.mode, &num)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let idx = match name {
                    "t0" => T0,
                    "t1" => T1,
                    _ => match name.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()) {
                        Some(i) if i < AMBIENT_VARS - X0 && name.len() == 2 => X0 + i,
                        _ => {
                            return Err(ParseError {
                                kind: ParseErrorKind::UnknownVariable(name.to_string()),
                                position: start,
                            })
                        }
                    },
                };
                Ok(Polynomial::term(Monomial::var(idx), Scalar::one(self.mode)))
            }
            Some(c) => Err(self.err(ParseErrorKind::UnexpectedChar(c as char))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldMode = FieldMode::Rational;

    #[test]
    fn scroll_minor() {
        let f = parse("x0*x4 - x1*x3", Q).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(parse("-(x1*x3 - x0*x4)", Q).unwrap(), f);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("x0 + y2", Q).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownVariable("y2".into()));
        assert_eq!(e.position, 5);
        assert_eq!(parse("x0/x1", Q).unwrap_err().kind, ParseErrorKind::DivisionAttempted);
        assert_eq!(parse("3/x1", Q).unwrap_err().kind, ParseErrorKind::DivisionAttempted);
        assert_eq!(parse("x0 +", Q).unwrap_err().kind, ParseErrorKind::UnexpectedEnd);
        assert_eq!(parse("x0 x1", Q).unwrap_err().kind, ParseErrorKind::TrailingInput);
        assert_eq!(parse("x5", Q).unwrap_err().kind, ParseErrorKind::UnknownVariable("x5".into()));
        assert_eq!(parse("(x0", Q).unwrap_err().kind, ParseErrorKind::UnexpectedEnd);
        assert_eq!(parse("1/0", Q).unwrap_err().kind, ParseErrorKind::ZeroDenominator);
    }

    #[test]
    fn powers_and_rationals() {
        let f = parse("(x0 + x1)^2 - 2/4*x2^0", Q).unwrap();
        let g = parse("x0^2 + 2*x0*x1 + x1^2 - 1/2", Q).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn prime_mode_reduces_literals() {
        let m = FieldMode::default_prime();
        let f = parse("1/2*x0 + 1/2*x0", m).unwrap();
        assert_eq!(f, parse("x0", m).unwrap());
    }
}
