//! Parser for the textual expression syntax shared by scalars, algebra
//! elements and forms.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' ['-'] integer)?
//! atom  := integer | ident | 'd' '(' expr ')' | '(' expr ')'
//! ```
//!
//! Identifiers of the form `th_<label>` denote basis 1-forms. `d(` always
//! starts a differential, so a generator named `d` must be written `d*(...)`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Ident(String),
    Theta(String),
    D(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

impl Expr {
    /// Visits every identifier, with `true` for basis forms.
    pub fn idents(&self, out: &mut Vec<(String, bool)>) {
        match self {
            Expr::Int(_) => {}
            Expr::Ident(s) => out.push((s.clone(), false)),
            Expr::Theta(s) => out.push((s.clone(), true)),
            Expr::D(a) | Expr::Neg(a) | Expr::Pow(a, _) => a.idents(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.idents(out);
                b.idents(out);
            }
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected integer exponent"));
            }
            let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let e: i32 = digits.parse().map_err(|_| self.err("exponent too large"))?;
            return Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(Expr::Int(digits.parse().expect("ascii digits")))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if name == "d" && self.src.get(self.pos) == Some(&b'(') {
                    self.pos += 1;
                    let e = self.expr()?;
                    if !self.eat(b')') {
                        return Err(self.err("expected `)` closing d("));
                    }
                    return Ok(Expr::D(Box::new(e)));
                }
                if let Some(label) = name.strip_prefix("th_") {
                    if label.is_empty() {
                        return Err(self.err("empty form label"));
                    }
                    return Ok(Expr::Theta(label.to_string()));
                }
                Ok(Expr::Ident(name.to_string()))
            }
            Some(_) => Err(self.err("unexpected character")),
        }
    }
}

/// Evaluates an expression in which every identifier is a parameter.
pub fn eval_scalar(e: &Expr) -> Result<Scalar> {
    Ok(match e {
        Expr::Int(n) => Scalar::from_rational(n.clone().into()),
        Expr::Ident(s) => Scalar::param(s),
        Expr::Theta(s) => return Err(Error::input(format!("form th_{s} in scalar context"))),
        Expr::D(_) => return Err(Error::input("differential in scalar context")),
        Expr::Add(a, b) => eval_scalar(a)? + eval_scalar(b)?,
        Expr::Sub(a, b) => eval_scalar(a)? - eval_scalar(b)?,
        Expr::Neg(a) => -eval_scalar(a)?,
        Expr::Mul(a, b) => eval_scalar(a)? * eval_scalar(b)?,
        Expr::Div(a, b) => eval_scalar(a)?.checked_div(&eval_scalar(b)?)?,
        Expr::Pow(a, k) => eval_scalar(a)?.pow(*k)?,
    })
}

pub fn parse_scalar(text: &str) -> Result<Scalar> {
    eval_scalar(&parse(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reprints_canonically() {
        let s = parse_scalar("(1 - q)/(t1)").unwrap();
        assert_eq!(s.to_string(), "(-q + 1)/t1");
        assert_eq!(parse_scalar(&s.to_string()).unwrap(), s);
        let s = parse_scalar("p*q - 1").unwrap();
        assert_eq!(parse_scalar(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn differential_and_forms() {
        let e = parse("x*d(y) - th_m1^2").unwrap();
        let mut ids = Vec::new();
        e.idents(&mut ids);
        assert_eq!(ids.len(), 3);
        assert!(ids.contains(&("m1".to_string(), true)));
    }

    #[test]
    fn reports_position() {
        assert!(matches!(parse("p + * q"), Err(Error::Parse { pos: 4, .. })));
    }
}
