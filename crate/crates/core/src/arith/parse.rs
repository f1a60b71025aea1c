//! Text syntax for polynomials: `1/6*t^2 + 5/6*t + 1`, `(t - 1)^2`, `s*t - s^2`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{IntPoly, MultiPoly, RatPoly};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [&'a str],
}

fn err(pos: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        column: pos + 1,
        message: message.into(),
    }
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(err(start, "expected integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.unary()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.unary()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        let mut negate = false;
        loop {
            if self.eat(b'-') {
                negate = !negate;
            } else if !self.eat(b'+') {
                break;
            }
        }
        let p = self.product()?;
        Ok(if negate { p.neg() } else { p })
    }

    fn product(&mut self) -> Result<MultiPoly> {
        let mut acc = self.power()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.power()?);
            } else if self.eat(b'/') {
                let at = self.pos;
                let d = self.integer()?;
                if d.is_zero() {
                    return Err(err(at, "division by zero"));
                }
                acc = acc.scale(&BigRational::new(BigInt::one(), d));
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.primary()?;
        if self.eat(b'^') {
            let at = self.pos;
            let k = self.integer()?;
            let k: u32 = k.try_into().map_err(|_| err(at, "exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<MultiPoly> {
        let n = self.names.len();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(err(self.pos, "expected `)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                Ok(MultiPoly::constant(n, BigRational::from_integer(v)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let ident = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.names.iter().position(|&x| x == ident) {
                    Some(i) => Ok(MultiPoly::var(n, i)),
                    None => Err(err(start, format!("unknown variable `{ident}`"))),
                }
            }
            Some(c) => Err(err(self.pos, format!("unexpected `{}`", c as char))),
            None => Err(err(self.pos, "unexpected end of input")),
        }
    }
}

/// Parse a polynomial in the given variables.
pub fn parse_multi_poly(text: &str, names: &[&str]) -> Result<MultiPoly> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        names,
    };
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(err(p.pos, "trailing input"));
    }
    Ok(out)
}

pub fn parse_rat_poly(text: &str, var: &str) -> Result<RatPoly> {
    Ok(parse_multi_poly(text, &[var])?.to_univariate().unwrap())
}

pub fn parse_int_poly(text: &str, var: &str) -> Result<IntPoly> {
    parse_rat_poly(text, var)?
        .to_int()
        .ok_or_else(|| err(0, format!("`{text}` has non-integral coefficients")))
}

/// A rational constant such as `-7/3` or `4`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    parse_multi_poly(text, &[])?
        .terms()
        .next()
        .map(|(_, c)| c.clone())
        .map_or(Ok(BigRational::zero()), Ok)
}
