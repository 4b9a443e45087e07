//! ASCII expression syntax shared by functions, forms and fields:
//! `3/2*x^2*y - z + 1`, `x^-1`, `u*dv - v*du`, `(x+y)^2`.

use num::Zero;

use crate::error::{Error, Result};
use crate::rings::{Ring, RingElement};
use crate::Rational;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rational),
    Ident(String, usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, i32, usize),
    Neg(Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(num::BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>> {
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
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Num(s.parse().expect("digits")), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(Error::Parse { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn at(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.at(), msg: msg.to_string() })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let at = self.at();
                self.pos += 1;
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), at);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Sym('^')) {
            return Ok(base);
        }
        let at = self.at();
        self.pos += 1;
        let paren = self.eat('(');
        let neg = self.eat('-');
        let e = match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                i32::try_from(n).or_else(|_| self.err("exponent too large"))?
            }
            _ => return self.err("expected integer exponent"),
        };
        if paren && !self.eat(')') {
            return self.err("expected `)`");
        }
        Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }, at))
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.at();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(Rational::from_integer(n)))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Ident(s, at))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            _ => self.err("expected a number, identifier or `(`"),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0, end: src.chars().count() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

/// Parses a polynomial (or Laurent / rational) expression in the ring's
/// variables and returns its normal form.
pub fn parse_element(src: &str, ring: &Ring) -> Result<RingElement> {
    eval_element(&parse(src)?, ring)
}

pub fn eval_element(e: &Expr, ring: &Ring) -> Result<RingElement> {
    Ok(match e {
        Expr::Num(c) => RingElement::constant(ring, c.clone()),
        Expr::Ident(name, pos) => match ring.var_index(name) {
            Some(i) => RingElement::var(ring, i),
            None => return Err(Error::Parse { pos: *pos, msg: format!("unknown variable `{name}`") }),
        },
        Expr::Add(a, b) => eval_element(a, ring)? + eval_element(b, ring)?,
        Expr::Sub(a, b) => eval_element(a, ring)? - eval_element(b, ring)?,
        Expr::Mul(a, b) => eval_element(a, ring)? * eval_element(b, ring)?,
        Expr::Neg(a) => -eval_element(a, ring)?,
        Expr::Div(a, b, pos) => {
            let d = eval_element(b, ring)?;
            let inv = divide_by(&d, *pos)?;
            eval_element(a, ring)? * inv
        }
        Expr::Pow(a, k, pos) => {
            let base = eval_element(a, ring)?;
            if *k < 0 && ring.has_monomial_basis() {
                match base.terms().iter().next() {
                    Some((m, _)) if base.terms().len() == 1 => {
                        if let Some(i) = m.exps().iter().position(|&x| x != 0) {
                            if !ring.is_inverted(i) {
                                return Err(Error::NegativePower(ring.variables()[i].clone()));
                            }
                        }
                    }
                    _ => {}
                }
            }
            base.pow(*k).map_err(|err| Error::Parse { pos: *pos, msg: err.to_string() })?
        }
    })
}

pub(crate) fn divide_by(d: &RingElement, pos: usize) -> Result<RingElement> {
    if d.is_zero() || d.constant_value().is_some_and(|c| c.is_zero()) {
        return Err(Error::Parse { pos, msg: "division by zero".into() });
    }
    d.inverse().ok_or_else(|| Error::Parse { pos, msg: format!("divisor `{d}` is not a unit") })
}
