//! Parser for Weierstrass equations such as
//! `y^2+(a+1)xy+ay = x^3+(a-1)x^2+(25a-45)x+72a-127` or `x^3-11x+14`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use super::Curve;
use crate::field::{Field, Ring};
use crate::quadfield::{BaseField, QuadNum};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {0:?}")]
    BadChar(char),
    #[error("unexpected end of input")]
    Eof,
    #[error("unexpected token {0}")]
    Unexpected(String),
    #[error("the generator `a` needs a quadratic base field")]
    NoGenerator,
    #[error("not a Weierstrass equation: {0}")]
    NotWeierstrass(String),
    #[error("division by zero")]
    DivZero,
    #[error("singular curve")]
    Singular,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Sym(char),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, ParseError> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '0'..='9' => {
                let st = i;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                let n: String = cs[st..i].iter().collect();
                out.push(Tok::Num(n.parse().expect("digits")));
            }
            'x' | 'y' | 'a' => {
                out.push(Tok::Sym(c));
                i += 1;
            }
            '+' | '-' | '*' | '^' | '(' | ')' | '=' | '/' => {
                out.push(Tok::Op(c));
                i += 1;
            }
            '\u{2212}' => {
                out.push(Tok::Op('-'));
                i += 1;
            }
            _ => return Err(ParseError::BadChar(c)),
        }
    }
    Ok(out)
}

/// Polynomial in x, y with coefficients in the base field.
type MPoly = BTreeMap<(u32, u32), QuadNum>;

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    field: &'a BaseField,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Result<Tok, ParseError> {
        let t = self.toks.get(self.pos).cloned().ok_or(ParseError::Eof)?;
        self.pos += 1;
        Ok(t)
    }

    fn constant(&self, c: QuadNum) -> MPoly {
        let mut m = MPoly::new();
        if !self.field.is_zero(&c) {
            m.insert((0, 0), c);
        }
        m
    }

    fn add(&self, a: &MPoly, b: &MPoly, sign: i64) -> MPoly {
        let mut out = a.clone();
        for (k, v) in b {
            let v = self.field.scale(v, sign);
            let e = out.entry(*k).or_insert_with(|| self.field.zero());
            *e = self.field.add(e, &v);
            if self.field.is_zero(e) {
                out.remove(k);
            }
        }
        out
    }

    fn mul(&self, a: &MPoly, b: &MPoly) -> MPoly {
        let mut out = MPoly::new();
        for ((i, j), u) in a {
            for ((k, l), v) in b {
                let key = (i + k, j + l);
                let e = out.entry(key).or_insert_with(|| self.field.zero());
                *e = self.field.add(e, &self.field.mul(u, v));
            }
        }
        out.retain(|_, v| !self.field.is_zero(v));
        out
    }

    fn expr(&mut self) -> Result<MPoly, ParseError> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let t = self.term()?;
            acc = self.add(&acc, &t, if c == '+' { 1 } else { -1 });
        }
        Ok(acc)
    }

    fn starts_factor(t: Option<&Tok>) -> bool {
        matches!(t, Some(Tok::Num(_)) | Some(Tok::Sym(_)) | Some(Tok::Op('(')))
    }

    fn term(&mut self) -> Result<MPoly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    let f = self.unary()?;
                    acc = self.mul(&acc, &f);
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let f = self.unary()?;
                    let c = match f.len() {
                        1 if f.contains_key(&(0, 0)) => f[&(0, 0)].clone(),
                        _ => return Err(ParseError::Unexpected("non-constant divisor".to_string())),
                    };
                    let ci = self.field.inv(&c).ok_or(ParseError::DivZero)?;
                    acc = self.mul(&acc, &self.constant(ci));
                }
                t if Self::starts_factor(t) => {
                    let f = self.power()?;
                    acc = self.mul(&acc, &f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MPoly, ParseError> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            let u = self.unary()?;
            return Ok(self.add(&MPoly::new(), &u, -1));
        }
        if let Some(Tok::Op('+')) = self.peek() {
            self.pos += 1;
        }
        self.power()
    }

    fn power(&mut self) -> Result<MPoly, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let e = match self.next()? {
                Tok::Num(n) => u32::try_from(n).map_err(|_| ParseError::Unexpected("exponent".to_string()))?,
                t => return Err(ParseError::Unexpected(alloc::format!("{t:?}"))),
            };
            let mut acc = self.constant(self.field.one());
            for _ in 0..e {
                acc = self.mul(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MPoly, ParseError> {
        match self.next()? {
            Tok::Num(n) => Ok(self.constant(QuadNum::rational(BigRational::from_integer(n)))),
            Tok::Sym('x') => Ok(MPoly::from([((1, 0), self.field.one())])),
            Tok::Sym('y') => Ok(MPoly::from([((0, 1), self.field.one())])),
            Tok::Sym('a') => match self.field.quad() {
                Some(q) => Ok(self.constant(q.gen())),
                None => Err(ParseError::NoGenerator),
            },
            Tok::Op('(') => {
                let e = self.expr()?;
                match self.next()? {
                    Tok::Op(')') => Ok(e),
                    t => Err(ParseError::Unexpected(alloc::format!("{t:?}"))),
                }
            }
            t => Err(ParseError::Unexpected(alloc::format!("{t:?}"))),
        }
    }
}

/// Parses a Weierstrass equation over the given field. Input without `=`
/// is read as the right-hand side of `y^2 = ...`.
pub fn parse_curve(input: &str, field: BaseField) -> Result<Curve, ParseError> {
    let toks = lex(input)?;
    let mut p = Parser { toks, pos: 0, field: &field };
    let first = p.expr()?;
    let (lhs, rhs) = match p.peek() {
        Some(Tok::Op('=')) => {
            p.pos += 1;
            let r = p.expr()?;
            (first, r)
        }
        None => (MPoly::from([((0, 2), field.one())]), first),
        Some(t) => return Err(ParseError::Unexpected(alloc::format!("{t:?}"))),
    };
    if p.peek().is_some() {
        return Err(ParseError::Unexpected(alloc::format!("{:?}", p.peek().unwrap())));
    }
    // lhs - rhs = y^2 + a1 xy + a3 y - x^3 - a2 x^2 - a4 x - a6
    let diff = p.add(&lhs, &rhs, -1);
    let get = |k: (u32, u32)| diff.get(&k).cloned().unwrap_or_else(|| field.zero());
    let lead = get((0, 2));
    if field.is_zero(&lead) || field.add(&lead, &get((3, 0))) != field.zero() {
        return Err(ParseError::NotWeierstrass(input.to_string()));
    }
    let allowed = [(0, 2), (1, 1), (0, 1), (3, 0), (2, 0), (1, 0), (0, 0)];
    if diff.keys().any(|k| !allowed.contains(k)) {
        return Err(ParseError::NotWeierstrass(input.to_string()));
    }
    let li = field.inv(&lead).expect("nonzero");
    let c = |k, s: i64| field.scale(&field.mul(&get(k), &li), s);
    let a = [c((1, 1), 1), c((2, 0), -1), c((0, 1), 1), c((1, 0), -1), c((0, 0), -1)];
    Curve::new(field, a).map_err(|_| ParseError::Singular)
}
