//! Parser for the textual polynomial grammar used in model documents:
//! integer coefficients, variables `T1..Tn`, `+`, `-`, `*`, `^` and parentheses.

use num_bigint::BigInt;

use super::{Poly, Rational};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::PolyParse { position: self.pos, message: message.into() })
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

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
    }

    fn expr(&mut self) -> Result<Poly<Rational>> {
        let mut acc = Poly::zero(self.nvars);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly<Rational>> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly<Rational>> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e: u32 = self.digits()?.parse().or_else(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly<Rational>> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'T') => {
                self.pos += 1;
                let at = self.pos;
                let idx: usize = self.digits()?.parse().or_else(|_| self.err("bad variable index"))?;
                if idx == 0 || idx > self.nvars {
                    self.pos = at;
                    return self.err(format!("variable T{idx} out of range 1..={}", self.nvars));
                }
                Ok(Poly::var(self.nvars, idx - 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let n: BigInt = self.digits()?.parse().expect("digits");
                Ok(Poly::constant(self.nvars, Rational::from_integer(n)))
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a polynomial in the variables `T1..T{nvars}`.
pub fn parse_poly(src: &str, nvars: usize) -> Result<Poly<Rational>> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, nvars };
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_relation_f() {
        let f = parse_poly("T3*T8 + T4*T9 + T1*T7", 11).unwrap();
        let v = |i: usize| Poly::<Rational>::var(11, i - 1);
        assert_eq!(f, v(3).mul(&v(8)).add(&v(4).mul(&v(9))).add(&v(1).mul(&v(7))));
    }

    #[test]
    fn whitespace_signs_powers_and_parentheses() {
        let p = parse_poly(" -2*T1^2+T2 *T11^2 - (T1 - 3) ", 11).unwrap();
        let q = parse_poly("3 - T1 - 2*T1^2 + T2*T11^2", 11).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse_poly("T12", 11), Err(Error::PolyParse { position: 1, .. })));
        assert!(matches!(parse_poly("T1 +", 2), Err(Error::PolyParse { .. })));
        assert!(matches!(parse_poly("T1 $ T2", 2), Err(Error::PolyParse { position: 3, .. })));
        assert!(matches!(parse_poly("x1", 2), Err(Error::PolyParse { .. })));
    }

    #[test]
    fn display_round_trip() {
        let p = parse_poly("T7 + T1*T11^2 + T2*T8*T11 + T2*T10^2 + T2*T8*T9", 11).unwrap();
        assert_eq!(parse_poly(&p.to_string(), 11).unwrap(), p);
    }
}
