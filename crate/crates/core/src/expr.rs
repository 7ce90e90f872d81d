//! Tiny infix expression parser shared by the relation and Weyl syntaxes.
//!
//! Grammar: sums and differences of products, `^` with a nonnegative
//! integer exponent, parentheses, identifiers, and rational literals such
//! as `3` or `1/2` (a literal `a/b` binds tighter than `*`).

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(String),
    Ident(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

/// Something an [`Expr`] can be evaluated into.
pub trait Interp {
    type V: Clone;
    fn number(&self, lit: &str) -> Result<Self::V>;
    fn ident(&self, name: &str) -> Result<Self::V>;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn neg(&self, a: &Self::V) -> Self::V;
}

impl Expr {
    pub fn eval<I: Interp>(&self, it: &I) -> Result<I::V> {
        Ok(match self {
            Expr::Num(s) => it.number(s)?,
            Expr::Ident(s) => it.ident(s)?,
            Expr::Add(a, b) => it.add(&a.eval(it)?, &b.eval(it)?),
            Expr::Sub(a, b) => it.add(&a.eval(it)?, &it.neg(&b.eval(it)?)),
            Expr::Mul(a, b) => it.mul(&a.eval(it)?, &b.eval(it)?),
            Expr::Neg(a) => it.neg(&a.eval(it)?),
            Expr::Pow(a, k) => {
                let base = a.eval(it)?;
                let mut acc = it.number("1")?;
                for _ in 0..*k {
                    acc = it.mul(&acc, &base);
                }
                acc
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(chars[start..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}' in '{src}'")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat_op(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat_op('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat_op('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.eat_op('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat_op('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat_op('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let k: u32 = n.parse().map_err(|_| Error::Parse(format!("bad exponent {n}")))?;
                    Ok(Expr::Pow(Box::new(base), k))
                }
                other => Err(Error::Parse(format!("expected exponent, found {other:?}"))),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                if self.eat_op('/') {
                    match self.toks.get(self.pos).cloned() {
                        Some(Tok::Num(d)) => {
                            self.pos += 1;
                            Ok(Expr::Num(format!("{n}/{d}")))
                        }
                        other => Err(Error::Parse(format!("expected denominator, found {other:?}"))),
                    }
                } else {
                    Ok(Expr::Num(n))
                }
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Ident(s))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat_op(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in '{src}'")));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Count;
    impl Interp for Count {
        type V = i64;
        fn number(&self, lit: &str) -> Result<i64> {
            lit.parse().map_err(|_| Error::Parse(lit.into()))
        }
        fn ident(&self, _: &str) -> Result<i64> {
            Ok(2)
        }
        fn add(&self, a: &i64, b: &i64) -> i64 {
            a + b
        }
        fn mul(&self, a: &i64, b: &i64) -> i64 {
            a * b
        }
        fn neg(&self, a: &i64) -> i64 {
            -a
        }
    }

    #[test]
    fn precedence() {
        assert_eq!(parse("1 + x*3^2").unwrap().eval(&Count).unwrap(), 19);
        assert_eq!(parse("-(x - 5)^2").unwrap().eval(&Count).unwrap(), -9);
        assert_eq!(parse("1/2").unwrap(), Expr::Num("1/2".into()));
    }

    #[test]
    fn errors() {
        assert!(parse("x +").is_err());
        assert!(parse("(x").is_err());
        assert!(parse("x $ y").is_err());
        assert!(parse("").is_err());
    }
}
