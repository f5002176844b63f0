//! Text parser for polynomials.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power (('*'|'/') power)*
//! power  := atom ['^' integer]
//! atom   := integer | letter | 'I' | 'z' | '(' expr ')'
//!         | '{' expr (',' expr)* '}'      symmetrizer
//!         | '[' expr ',' expr ']'          commutator
//! ```
//!
//! `I` is the unit, `z` the cube root of unity ζ (only for scalar fields that
//! contain it). Division is allowed by scalar-valued expressions only.

use super::{symmetrize, Letter, NCPoly, Rules};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Parse `src` into a polynomial normalized under `rules`.
pub fn parse_poly<S: Scalar>(src: &str, rules: Rules) -> Result<NCPoly<S>> {
    let mut p = Parser { src, pos: 0, rules };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(Error::parse(p.pos, format!("unexpected `{}`", &src[p.pos..])));
    }
    Ok(out.with_rules(rules))
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    rules: Rules,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected `{c}`")))
        }
    }

    fn expr<S: Scalar>(&mut self) -> Result<NCPoly<S>> {
        let mut acc = NCPoly::zero().with_rules(self.rules);
        let mut sign = 1;
        if self.eat('-') {
            sign = -1;
        } else {
            self.eat('+');
        }
        loop {
            let t = self.term::<S>()?;
            acc = if sign < 0 { acc.sub(&t) } else { acc.add(&t) };
            if self.eat('+') {
                sign = 1;
            } else if self.eat('-') {
                sign = -1;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<S: Scalar>(&mut self) -> Result<NCPoly<S>> {
        let mut acc = self.power::<S>()?;
        loop {
            if self.eat('*') {
                let rhs = self.power::<S>()?;
                acc = acc.mul(&rhs);
            } else if self.peek() == Some('/') {
                let at = self.pos;
                self.pos += 1;
                let rhs = self.power::<S>()?;
                let c = rhs
                    .as_constant()
                    .ok_or_else(|| Error::parse(at, "division by a non-scalar expression"))?;
                acc = acc.scale(&c.inv()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power<S: Scalar>(&mut self) -> Result<NCPoly<S>> {
        let base = self.atom::<S>()?;
        if self.eat('^') {
            let n = self.integer()?;
            let n = u32::try_from(n).map_err(|_| Error::parse(self.pos, "exponent too large"))?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.peek_raw().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos].parse().map_err(|_| Error::parse(start, "expected an integer"))
    }

    fn atom<S: Scalar>(&mut self) -> Result<NCPoly<S>> {
        let start = {
            self.skip_ws();
            self.pos
        };
        match self.peek_raw() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let n = i64::try_from(n).map_err(|_| Error::parse(start, "integer too large"))?;
                Ok(NCPoly::int(n).with_rules(self.rules))
            }
            Some('(') => {
                // printed coefficients such as `(1/2-3/2z)` are scalar literals
                if let Some(close) = self.src[self.pos..].find(')') {
                    let lit = &self.src[self.pos..=self.pos + close];
                    if let Ok(c) = S::parse_scalar(lit) {
                        self.pos += close + 1;
                        return Ok(NCPoly::constant(c).with_rules(self.rules));
                    }
                }
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some('{') => {
                self.pos += 1;
                let mut args = vec![self.expr::<S>()?];
                while self.eat(',') {
                    args.push(self.expr()?);
                }
                self.expect('}')?;
                symmetrize(&args)
            }
            Some('[') => {
                self.pos += 1;
                let a = self.expr::<S>()?;
                self.expect(',')?;
                let b = self.expr::<S>()?;
                self.expect(']')?;
                Ok(a.commutator(&b))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                while self.peek_raw().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let ident = &self.src[start..self.pos];
                match ident {
                    "I" => Ok(NCPoly::one().with_rules(self.rules)),
                    "z" => S::zeta()
                        .map(NCPoly::constant)
                        .ok_or_else(|| Error::parse(start, "ζ is not in this scalar field")),
                    _ => {
                        let l = Letter::parse(ident).map_err(|e| match e {
                            Error::Parse { msg, .. } => Error::parse(start, msg),
                            other => other,
                        })?;
                        Ok(NCPoly::letter(l).with_rules(self.rules))
                    }
                }
            }
            Some(c) => Err(Error::parse(start, format!("unexpected `{c}`"))),
            None => Err(Error::parse(start, "unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{CycScalar, Rational};

    #[test]
    fn parses_bracket_notation() {
        let a: NCPoly<Rational> = parse_poly("[u, u_x]", Rules::Free).unwrap();
        let b = parse_poly("u*u_x - u_x*u", Rules::Free).unwrap();
        assert_eq!(a, b);
        let s: NCPoly<Rational> = parse_poly("{a, b}/2", Rules::Free).unwrap();
        assert_eq!(s, parse_poly("1/2*a*b + 1/2*b*a", Rules::Free).unwrap());
    }

    #[test]
    fn parses_zeta_and_division() {
        let a: NCPoly<CycScalar> = parse_poly("z/(1+z)*q_x", Rules::Free).unwrap();
        let b = parse_poly("(1+z)*q_x", Rules::Free).unwrap();
        // ζ/(1+ζ) = ζ·(−ζ) = 1 + ζ
        assert_eq!(a, b);
        assert!(parse_poly::<Rational>("z*q", Rules::Free).is_err());
        assert!(parse_poly::<Rational>("q/r", Rules::Free).is_err());
        assert!(parse_poly::<Rational>("q/0", Rules::Free).is_err());
    }

    #[test]
    fn reports_positions() {
        match parse_poly::<Rational>("q + * r", Rules::Free) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse_poly::<Rational>("q r", Rules::Free).is_err());
    }

    #[test]
    fn unit_and_powers() {
        let a: NCPoly<Rational> = parse_poly("(I + u)^2", Rules::Free).unwrap();
        assert_eq!(a, parse_poly("1 + 2*u + u*u", Rules::Free).unwrap());
    }
}
