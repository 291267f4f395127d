//! Polynomial text grammar.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*      division only by nonzero constants
//! unary := '-' unary | power
//! power := atom ('^' integer)?
//! atom  := integer | identifier | '(' expr ')'
//! ```
//! Whitespace is insignificant. Errors carry line and column.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, Rat};

pub struct PolyParser<'a> {
    vars: &'a [String],
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col0: usize,
}

/// Parses a polynomial in the declared variables.
pub fn parse_poly(text: &str, vars: &[String]) -> Result<Poly> {
    parse_poly_at(text, vars, 1, 1)
}

/// Like [`parse_poly`], reporting positions relative to `(line, col)`.
pub fn parse_poly_at(text: &str, vars: &[String], line: usize, col: usize) -> Result<Poly> {
    let mut p = PolyParser {
        vars,
        chars: text.chars().collect(),
        pos: 0,
        line,
        col0: col,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err(&format!("unexpected '{}'", p.chars[p.pos])));
    }
    Ok(out)
}

impl<'a> PolyParser<'a> {
    fn n(&self) -> usize {
        self.vars.len()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            line: self.line,
            col: self.col0 + self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc += &self.term()?;
                }
                '-' => {
                    self.pos += 1;
                    acc -= &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                '/' => {
                    self.pos += 1;
                    let start = self.pos;
                    let d = self.unary()?;
                    if !d.is_constant() || d.is_zero() {
                        self.pos = start;
                        return Err(self.err("division only by a nonzero constant"));
                    }
                    acc = acc.scale(&(Rat::one() / d.constant_term()));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.peek() == Some('-') {
            self.pos += 1;
            let v = self.unary()?;
            return Ok(-&v);
        }
        if self.peek() == Some('+') {
            self.pos += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let k = self.integer()?;
            let k: u32 = k
                .try_into()
                .map_err(|_| self.err("exponent must be a small nonnegative integer"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits"))
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let k = self.integer()?;
                Ok(Poly::constant(self.n(), Rat::from_integer(k)))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.pos < self.chars.len()
                    && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(Poly::var(self.n(), i)),
                    None => {
                        self.pos = start;
                        Err(self.err(&format!("undeclared variable '{}'", name)))
                    }
                }
            }
            Some(c) => Err(self.err(&format!("unexpected '{}'", c))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses a rational literal such as `-7/2`.
pub fn parse_rat(text: &str) -> Option<Rat> {
    let t = text.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(b) => (true, b.trim()),
        None => (false, t),
    };
    let r = match body.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b.is_zero() {
                return None;
            }
            Rat::new(a, b)
        }
        None => Rat::from_integer(body.parse().ok()?),
    };
    Some(if neg { -r } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    fn vars() -> Vec<String> {
        vec!["q".into(), "p".into()]
    }

    #[test]
    fn parses_rationals_and_powers() {
        let p = parse_poly("-7/2*q^2 + 3*(p - q)", &vars()).unwrap();
        let q = Poly::var(2, 0);
        let pp = Poly::var(2, 1);
        let want = &(&q.pow(2).scale(&ratio(-7, 2)) + &pp.scale(&rat(3))) - &q.scale(&rat(3));
        assert_eq!(p, want);
    }

    #[test]
    fn reports_position_of_undeclared_variable() {
        let e = parse_poly("q + \n z", &vars()).unwrap_err();
        match e {
            Error::Parse { col, msg, .. } => {
                assert!(msg.contains("undeclared"));
                assert_eq!(col, 7);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn rejects_division_by_variable() {
        assert!(parse_poly("q/p", &vars()).is_err());
    }

    #[test]
    fn rat_literals() {
        assert_eq!(parse_rat("-7/2").unwrap(), ratio(-7, 2));
        assert_eq!(parse_rat("3").unwrap(), rat(3));
        assert!(parse_rat("1/0").is_none());
    }
}
