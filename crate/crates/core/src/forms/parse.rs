//! Form text: `"a0,a1,...,an"` or a homogeneous polynomial in `x` and `y`
//! built from terms `c*x^i*y^j` joined by `+`/`−`. Whitespace is ignored.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::BinaryForm;
use crate::error::{ParseError, Result};

pub fn parse_form(s: &str) -> Result<BinaryForm> {
    if s.contains(',') || !s.chars().any(|c| c.is_ascii_alphabetic()) {
        parse_list(s)
    } else {
        parse_polynomial(s)
    }
}

fn parse_int(field: &str, pos: usize) -> std::result::Result<BigInt, ParseError> {
    let t = field.trim();
    let offset = pos + (field.len() - field.trim_start().len());
    if t.is_empty() {
        return Err(ParseError::new(offset, "empty coefficient"));
    }
    let body = t.strip_prefix(['+', '-']).unwrap_or(t).trim_start();
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        let bad = t
            .char_indices()
            .skip(1)
            .find(|(_, c)| !c.is_ascii_digit() && !c.is_whitespace())
            .map_or(0, |(i, _)| i);
        return Err(ParseError::new(offset + bad, format!("invalid integer {t:?}")));
    }
    let neg = t.starts_with('-');
    let v: BigInt = body.parse().map_err(|_| ParseError::new(offset, "invalid integer"))?;
    Ok(if neg { -v } else { v })
}

fn parse_list(s: &str) -> Result<BinaryForm> {
    let mut coeffs = Vec::new();
    let mut pos = 0;
    for field in s.split(',') {
        coeffs.push(parse_int(field, pos)?);
        pos += field.len() + 1;
    }
    if coeffs.len() < 2 {
        return Err(ParseError::new(s.len(), "need at least two coefficients").into());
    }
    BinaryForm::new(coeffs)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    X,
    Y,
    Caret,
    Star,
    Plus,
    Minus,
}

fn tokenize(s: &str) -> std::result::Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'0'..=b'9' => {
                let start = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                let v: BigInt = s[start..i].parse().expect("digits");
                out.push((start, Tok::Num(v)));
            }
            b'x' | b'X' => {
                out.push((i, Tok::X));
                i += 1;
            }
            b'y' | b'Y' => {
                out.push((i, Tok::Y));
                i += 1;
            }
            b'^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            b'*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            b'+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            b'-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            _ => {
                let ch = s[i..].chars().next().expect("in bounds");
                return Err(ParseError::new(i, format!("unexpected character {ch:?}")));
            }
        }
    }
    Ok(out)
}

struct Cursor {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Cursor {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn exponent(&mut self) -> std::result::Result<usize, ParseError> {
        if self.peek() != Some(&Tok::Caret) {
            return Ok(1);
        }
        self.next();
        let pos = self.pos();
        match self.next() {
            Some(Tok::Num(v)) => usize::try_from(&v).ok().filter(|&e| e <= 10_000).ok_or_else(|| ParseError::new(pos, "exponent too large")),
            _ => Err(ParseError::new(pos, "expected exponent after '^'")),
        }
    }

    /// One term: optional factors separated by optional `*`.
    fn term(&mut self) -> std::result::Result<(BigInt, usize, usize), ParseError> {
        let mut coeff = BigInt::one();
        let (mut i, mut j) = (0usize, 0usize);
        let mut factors = 0;
        loop {
            match self.peek() {
                Some(Tok::Num(_)) => {
                    let Some(Tok::Num(v)) = self.next() else { unreachable!() };
                    coeff *= v;
                }
                Some(Tok::X) => {
                    self.next();
                    i += self.exponent()?;
                }
                Some(Tok::Y) => {
                    self.next();
                    j += self.exponent()?;
                }
                _ => {
                    return if factors == 0 {
                        Err(ParseError::new(self.pos(), "expected a term"))
                    } else {
                        Ok((coeff, i, j))
                    };
                }
            }
            factors += 1;
            if self.peek() == Some(&Tok::Star) {
                self.next();
                if !matches!(self.peek(), Some(Tok::Num(_) | Tok::X | Tok::Y)) {
                    return Err(ParseError::new(self.pos(), "expected a factor after '*'"));
                }
            }
        }
    }
}

fn parse_polynomial(s: &str) -> Result<BinaryForm> {
    let toks = tokenize(s)?;
    let mut cur = Cursor { toks, at: 0, end: s.len() };
    let mut terms: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
    let mut degree: Option<(usize, usize)> = None;
    let mut first = true;
    while cur.peek().is_some() || first {
        let mut sign = BigInt::one();
        match cur.peek() {
            Some(Tok::Plus) => {
                cur.next();
            }
            Some(Tok::Minus) => {
                cur.next();
                sign = -sign;
            }
            _ if !first => return Err(ParseError::new(cur.pos(), "expected '+' or '-'").into()),
            _ => {}
        }
        let pos = cur.pos();
        let (c, i, j) = cur.term()?;
        match degree {
            None => degree = Some((i + j, pos)),
            Some((d, _)) if d != i + j => {
                return Err(ParseError::new(
                    pos,
                    format!("term of degree {} in a form of degree {d}", i + j),
                )
                .into())
            }
            _ => {}
        }
        *terms.entry((i, j)).or_insert_with(BigInt::zero) += sign * c;
        first = false;
    }
    let (n, pos) = degree.expect("at least one term");
    if n == 0 {
        return Err(ParseError::new(pos, "form has degree 0").into());
    }
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for ((_, j), c) in terms {
        coeffs[j] += c;
    }
    BinaryForm::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn both_formats_agree() {
        let a = parse_form("1,0,0,-2").unwrap();
        let b = parse_form("x^3 - 2*y^3").unwrap();
        let c = parse_form(" X^3-2 y^3 ").unwrap();
        let d = parse_form("-2*y^3 + x^3").unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);
        assert_eq!(c, d);
    }

    #[test]
    fn implicit_products_and_repeats() {
        let a = parse_form("2x^2y + x^3 + x^2*y - y^3").unwrap();
        assert_eq!(a, parse_form("1,3,0,-1").unwrap());
        let b = parse_form("x*x*y - 2*y*y*y").unwrap();
        assert_eq!(b, parse_form("0,1,0,-2").unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        let err = |s: &str| match parse_form(s) {
            Err(Error::Parse(p)) => p.position,
            other => panic!("{s:?}: {other:?}"),
        };
        assert_eq!(err("1,,2"), 2);
        assert_eq!(err("1, 2,x3"), 5);
        assert_eq!(err("x^3 + y^2"), 6);
        assert_eq!(err("x^3 + "), 6);
        assert_eq!(err("x^3 ? y^3"), 4);
        assert_eq!(err("1,2a"), 3);
        assert_eq!(err("5"), 1);
    }

    #[test]
    fn zero_form_rejected() {
        assert!(matches!(parse_form("0,0,0"), Err(Error::ZeroForm)));
        assert!(matches!(parse_form("x^2 - x^2"), Err(Error::ZeroForm)));
    }
}
