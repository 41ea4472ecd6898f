//! Text syntax: rationals, `x1..xn`, `t`, `r`, `s`, `+ - * / ^`, parentheses and
//! `exp(a*r + b*s)`. Division is allowed by constants only.

use alloc::format;
use alloc::string::String;

use num_traits::Zero;

use super::{SymExpr, Var};
use crate::error::{Error, Result};
use crate::params::Rational;

/// Parses an expression over the variables of an `n`-dimensional problem.
pub fn parse_expr(src: &str, n: usize) -> Result<SymExpr> {
    parse_expr_with(src, &|name| Var::parse(name, n).ok())
}

/// Parses with a caller-supplied variable resolver (used for auxiliary variables such as `z`).
pub fn parse_expr_with(src: &str, resolve: &dyn Fn(&str) -> Option<Var>) -> Result<SymExpr> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, resolve };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    resolve: &'a dyn Fn(&str) -> Option<Var>,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: String::from(msg) }
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<SymExpr> {
        let mut acc = self.product()?;
        loop {
            if self.eat(b'+') {
                acc = acc + self.product()?;
            } else if self.eat(b'-') {
                acc = acc - self.product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<SymExpr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc * self.unary()?;
            } else if self.eat(b'/') {
                let at = self.pos;
                let d = self.unary()?;
                match d.as_constant() {
                    Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                    Some(_) => return Err(Error::Parse { pos: at, msg: String::from("division by zero") }),
                    None => {
                        return Err(Error::Parse {
                            pos: at,
                            msg: String::from("division is only allowed by constants"),
                        })
                    }
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<SymExpr> {
        if self.eat(b'-') {
            Ok(-self.unary()?)
        } else if self.eat(b'+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<SymExpr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
            let e: u32 = digits.parse().map_err(|_| self.error("exponent must be a non-negative integer"))?;
            if e > 64 {
                return Err(self.error("exponent too large"));
            }
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<SymExpr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("0");
                let v: Rational = digits.parse().map_err(|_| self.error("bad number"))?;
                Ok(SymExpr::constant(v))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                if name == "exp" {
                    return self.exponential(start);
                }
                match (self.resolve)(name) {
                    Some(v) => Ok(SymExpr::var(v)),
                    None => Err(Error::UnknownVariable(String::from(name))),
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn exponential(&mut self, start: usize) -> Result<SymExpr> {
        if !self.eat(b'(') {
            return Err(self.error("expected `(` after exp"));
        }
        let arg = self.expr()?;
        if !self.eat(b')') {
            return Err(self.error("expected `)`"));
        }
        let (a, b) = linear_rs(&arg).ok_or_else(|| Error::Parse {
            pos: start,
            msg: format!("exp argument must be a linear form a*r + b*s, got `{arg}`"),
        })?;
        Ok(SymExpr::exp_linear(a, b))
    }
}

/// Extracts `(a, b)` if `e == a*r + b*s` exactly.
fn linear_rs(e: &SymExpr) -> Option<(Rational, Rational)> {
    let (mut a, mut b) = (Rational::zero(), Rational::zero());
    for term in e.terms() {
        if !(term.a.is_zero() && term.b.is_zero()) {
            return None;
        }
        match term.mono.factors() {
            [(Var::R, 1)] => a = term.coeff.clone(),
            [(Var::S, 1)] => b = term.coeff.clone(),
            _ => return None,
        }
    }
    Some((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{int, rat};

    #[test]
    fn parses_polynomials_and_exponentials() {
        let e = parse_expr("2*x1^2*t - 1/2*r + exp(2*r + s)", 1).unwrap();
        let want = SymExpr::int(2) * SymExpr::var(Var::X(1)).pow(2) * SymExpr::var(Var::T)
            - SymExpr::var(Var::R).scale(&rat(1, 2))
            + SymExpr::exp_linear(int(2), int(1));
        assert_eq!(e, want);
        let e = parse_expr("-(x1 + x2)^2 / 4", 2).unwrap();
        assert_eq!(format!("{e}"), "-1/2*x1*x2 - 1/4*x1^2 - 1/4*x2^2");
    }

    #[test]
    fn display_round_trips() {
        let src = "3*exp(-1/3*r - s)*x1*t^2 - r*s + 7/5";
        let e = parse_expr(src, 2).unwrap();
        assert_eq!(parse_expr(&format!("{e}"), 2).unwrap(), e);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_expr("x3", 2), Err(Error::UnknownVariable(_))));
        assert!(parse_expr("exp(x1)", 1).is_err());
        assert!(parse_expr("exp(r + 1)", 1).is_err());
        assert!(parse_expr("r / s", 1).is_err());
        assert!(parse_expr("r / 0", 1).is_err());
        assert!(parse_expr("(r + s", 1).is_err());
        assert!(parse_expr("r s", 1).is_err());
        assert!(parse_expr("r^-1", 1).is_err());
        assert!(parse_expr("", 1).is_err());
    }

    #[test]
    fn custom_resolver() {
        let e = parse_expr_with("z^2 + 1", &|n| (n == "z").then_some(Var::T)).unwrap();
        assert_eq!(e, SymExpr::var(Var::T).pow(2) + SymExpr::one());
    }
}
