//! Tiny expression parser shared by polynomial and Weyl-algebra inputs.
//!
//! Grammar: sums and differences of products; factors are integers,
//! identifiers, parenthesised expressions and `^` with a nonnegative
//! integer exponent. `/` is only allowed with a constant right-hand side.
//! Products are evaluated left to right, so noncommutative targets see
//! factors in the written order.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rational),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

/// Target of expression evaluation.
pub trait ExprAlgebra {
    type Elem: Clone;
    fn num(&self, r: &Rational) -> Self::Elem;
    fn var(&self, name: &str) -> Result<Self::Elem>;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
}

impl Expr {
    pub fn eval<A: ExprAlgebra>(&self, alg: &A) -> Result<A::Elem> {
        Ok(match self {
            Expr::Num(r) => alg.num(r),
            Expr::Var(v) => alg.var(v)?,
            Expr::Neg(a) => alg.neg(a.eval(alg)?),
            Expr::Add(a, b) => alg.add(a.eval(alg)?, b.eval(alg)?),
            Expr::Sub(a, b) => {
                let b = alg.neg(b.eval(alg)?);
                alg.add(a.eval(alg)?, b)
            }
            Expr::Mul(a, b) => alg.mul(a.eval(alg)?, b.eval(alg)?),
            Expr::Div(a, b) => {
                let d = b.constant_value().ok_or_else(|| {
                    Error::InvalidInput("division by a non-constant expression".into())
                })?;
                if d.is_zero() {
                    return Err(Error::InvalidInput("division by zero".into()));
                }
                alg.mul(a.eval(alg)?, alg.num(&d.recip()))
            }
            Expr::Pow(a, k) => {
                let base = a.eval(alg)?;
                let mut acc = alg.num(&Rational::one());
                for _ in 0..*k {
                    acc = alg.mul(acc, base.clone());
                }
                acc
            }
        })
    }

    /// Value when the expression contains no variables.
    pub fn constant_value(&self) -> Option<Rational> {
        Some(match self {
            Expr::Num(r) => r.clone(),
            Expr::Var(_) => return None,
            Expr::Neg(a) => -a.constant_value()?,
            Expr::Add(a, b) => a.constant_value()? + b.constant_value()?,
            Expr::Sub(a, b) => a.constant_value()? - b.constant_value()?,
            Expr::Mul(a, b) => a.constant_value()? * b.constant_value()?,
            Expr::Div(a, b) => {
                let d = b.constant_value()?;
                if d.is_zero() {
                    return None;
                }
                a.constant_value()? / d
            }
            Expr::Pow(a, k) => {
                let v = a.constant_value()?;
                (0..*k).fold(Rational::one(), |acc, _| acc * v.clone())
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        if ch.is_ascii_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Num(s[start..i].parse().expect("digits"))));
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(s[start..i].to_string())));
        } else if "+-*/^()".contains(ch) {
            out.push((i, Tok::Op(ch)));
            i += 1;
        } else {
            return Err(Error::Parse { pos: i, msg: format!("unexpected character {ch:?}") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.here(), msg: msg.to_string() })
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Expr::Neg(Box::new(self.product()?))
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Op('+')) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Some(Tok::Op('-')) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let k: u32 = n.try_into().or_else(|_| self.err("exponent too large"))?;
                    return Ok(Expr::Pow(Box::new(base), k));
                }
                _ => return self.err("expected integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(Rational::from_integer(n)))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Var(s))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => self.err("expected ')'"),
                }
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.power()?)))
            }
            _ => self.err("expected a number, variable or '('"),
        }
    }
}

pub fn parse_expr(s: &str) -> Result<Expr> {
    let toks = tokenize(s)?;
    let mut p = Parser { toks, pos: 0, len: s.len() };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let e = p.sum()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    #[test]
    fn constants() {
        let e = parse_expr("-(3/4 - 1)*2^3").unwrap();
        assert_eq!(e.constant_value(), Some(rat(2, 1)));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_expr("c1 + * c2") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        assert!(parse_expr("").is_err());
        assert!(parse_expr("(c1").is_err());
        assert!(parse_expr("c1 $").is_err());
    }
}
