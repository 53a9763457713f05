//! Text grammar for polynomials:
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ('^' natural)?
//! atom   := integer | identifier | '(' expr ')' | ('+'|'-') factor
//! ```
//!
//! Division is only allowed by nonzero constants. Whitespace is ignored.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::Ring;

pub const MAX_EXPONENT: u32 = 4096;
pub const MAX_TERMS: usize = 50_000;
const MAX_DEPTH: usize = 200;

pub fn parse_poly(ring: &Ring, src: &str) -> Result<Poly> {
    let mut p = Parser {
        ring,
        src,
        pos: 0,
        depth: 0,
    };
    p.skip_ws();
    if p.peek().is_none() {
        return Err(p.error("empty polynomial"));
    }
    let f = p.expr()?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(p.error(&format!("unexpected `{c}`")));
    }
    Ok(f)
}

struct Parser<'a> {
    ring: &'a Ring,
    src: &'a str,
    pos: usize,
    depth: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        let before = &self.src[..self.pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Error::Parse {
            line,
            column,
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn guard(&self, f: &Poly) -> Result<()> {
        if f.len() > MAX_TERMS {
            return Err(self.error(&format!("polynomial exceeds {MAX_TERMS} terms")));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Poly> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error("expression nested too deeply"));
        }
        self.skip_ws();
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some('-') => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => break,
            }
            self.guard(&acc)?;
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.bump();
                    let f = self.factor()?;
                    if acc.len().saturating_mul(f.len()) > MAX_TERMS * 4 {
                        return Err(self.error("product too large"));
                    }
                    acc = &acc * &f;
                    self.guard(&acc)?;
                }
                Some('/') => {
                    self.bump();
                    let f = self.factor()?;
                    match f.constant_value() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                        Some(_) => return Err(self.error("division by zero")),
                        None => return Err(self.error("division by a non-constant")),
                    }
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.bump();
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.error("expected a natural exponent after `^`"));
        }
        let k: u32 = match digits.parse() {
            Ok(k) if k <= MAX_EXPONENT => k,
            _ => {
                self.pos = start;
                return Err(self.error(&format!("exponent exceeds {MAX_EXPONENT}")));
            }
        };
        if base.len() <= 1 {
            return Ok(base.pow(k));
        }
        let mut acc = self.ring.one();
        for _ in 0..k {
            acc = &acc * &base;
            self.guard(&acc)?;
        }
        Ok(acc)
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        &self.src[start..self.pos]
    }

    fn atom(&mut self) -> Result<Poly> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits().to_string();
                let n: BigInt = digits.parse().expect("digits");
                Ok(self.ring.constant(BigRational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                    self.bump();
                }
                let name = &self.src[start..self.pos];
                match self.ring.index_of(name) {
                    Some(i) => Ok(self.ring.gen(i)),
                    None => {
                        self.pos = start;
                        Err(self.error(&format!("unknown variable `{name}`")))
                    }
                }
            }
            Some('(') => {
                self.bump();
                let e = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.bump();
                Ok(e)
            }
            Some('-') => {
                self.bump();
                Ok(-self.factor_nested()?)
            }
            Some('+') => {
                self.bump();
                self.factor_nested()
            }
            Some(c) => Err(self.error(&format!("unexpected `{c}`"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn factor_nested(&mut self) -> Result<Poly> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error("expression nested too deeply"));
        }
        let f = self.factor();
        self.depth -= 1;
        f
    }
}
