use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::Field;
use crate::error::{Error, Result};
use crate::weyl::{Monomial, Op, WeylAlgebra};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos, msg: &str| Error::Parse {
        pos,
        msg: msg.to_string(),
    };
    while i < b.len() {
        let c = b[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'+' => out.push((i, Tok::Plus)),
            b'-' => out.push((i, Tok::Minus)),
            b'*' => out.push((i, Tok::Star)),
            b'/' => out.push((i, Tok::Slash)),
            b'^' => out.push((i, Tok::Caret)),
            b'(' => out.push((i, Tok::LParen)),
            b')' => out.push((i, Tok::RParen)),
            b'0'..=b'9' => {
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                let num: BigInt = text[start..i].parse().unwrap();
                out.push((start, Tok::Num(BigRational::from_integer(num))));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => return Err(err(i, &format!("unexpected character '{}'", c as char))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a, K: Field> {
    alg: &'a WeylAlgebra<K>,
    names: &'a [String],
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl<'a, K: Field> Parser<'a, K> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn at(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.at(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<Op<K>> {
        let alg = self.alg;
        let mut neg = false;
        match self.peek() {
            Some(Tok::Minus) => {
                neg = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if neg {
            acc = alg.neg(&acc);
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = alg.add(&acc, &t);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = alg.sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Op<K>> {
        let alg = self.alg;
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f = self.power()?;
                    acc = match alg.try_mul(&acc, &f) {
                        Ok(p) => p,
                        Err(_) => return self.err("product of two module elements"),
                    };
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.at();
                    let f = self.power()?;
                    let scalar = match f.terms() {
                        [(m, c)] if m.is_one() && m.comp() == 0 => c.clone(),
                        _ => {
                            return Err(Error::Parse {
                                pos: at,
                                msg: "divisor must be a nonzero scalar".into(),
                            })
                        }
                    };
                    let inv = alg.field().inv(&scalar).unwrap();
                    acc = alg.mul(&acc, &alg.constant(inv));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Op<K>> {
        let mut base = self.atom()?;
        while self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let e = match self.peek() {
                Some(Tok::Num(q)) if q.is_integer() && *q >= BigRational::from_integer(0.into()) => {
                    u32::try_from(q.to_integer()).map_err(|_| Error::Parse {
                        pos: self.at(),
                        msg: "exponent too large".into(),
                    })?
                }
                _ => return self.err("expected a natural exponent"),
            };
            self.pos += 1;
            if e > 1 && base.terms().iter().any(|(m, _)| m.comp() > 0) {
                return self.err("power of a module element");
            }
            base = self.alg.pow(&base, e);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Op<K>> {
        let alg = self.alg;
        let k = alg.field();
        let tok = match self.toks.get(self.pos) {
            Some(t) => t.1.clone(),
            None => return self.err("unexpected end of input"),
        };
        match tok {
            Tok::Num(q) => {
                let c = match k.from_rational(&q) {
                    Some(c) => c,
                    None => return self.err("literal not representable in the field"),
                };
                self.pos += 1;
                Ok(alg.constant(c))
            }
            Tok::LParen => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Tok::Ident(name) => {
                let op = self.resolve(&name)?;
                self.pos += 1;
                Ok(op)
            }
            _ => self.err("expected a factor"),
        }
    }

    fn resolve(&self, name: &str) -> Result<Op<K>> {
        let alg = self.alg;
        if let Some(i) = self.names.iter().position(|v| v == name) {
            return Ok(alg.x(i));
        }
        if let Some(rest) = name.strip_prefix('d') {
            if let Some(i) = self.names.iter().position(|v| v == rest) {
                return Ok(alg.d(i));
            }
            if rest == "t" {
                return alg.dt().or_else(|_| self.err("dt is not available here"));
            }
        }
        if name == "t" {
            return match alg.field().parameter() {
                Some(t) => Ok(alg.constant(t)),
                None => self.err("the field has no parameter t"),
            };
        }
        if let Some(rest) = name.strip_prefix('e') {
            if let Ok(c) = rest.parse::<usize>() {
                if c == 0 || c > alg.rank() {
                    return self.err(format!("component e{c} out of range"));
                }
                return Ok(alg.unit(c - 1));
            }
        }
        self.err(format!("unknown symbol '{name}'"))
    }
}

/// Parses an operator; products expand left to right non-commutatively.
pub fn parse_operator<K: Field>(alg: &WeylAlgebra<K>, names: &[String], text: &str) -> Result<Op<K>> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            msg: "empty expression".into(),
        });
    }
    let mut p = Parser {
        alg,
        names,
        toks,
        pos: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

fn monomial_text(m: &Monomial, names: &[String], rank: usize) -> String {
    let mut parts = Vec::new();
    let mut push = |name: String, e: u16| match e {
        0 => {}
        1 => parts.push(name),
        _ => parts.push(format!("{name}^{e}")),
    };
    for (i, &a) in m.alpha().iter().enumerate() {
        push(names[i].clone(), a);
    }
    for (i, &b) in m.beta().iter().enumerate() {
        push(format!("d{}", names[i]), b);
    }
    push("dt".into(), m.dt());
    if rank > 1 {
        parts.push(format!("e{}", m.comp() + 1));
    }
    parts.join("*")
}

/// Canonical text: terms in descending order.
pub fn print_operator<K: Field>(alg: &WeylAlgebra<K>, names: &[String], op: &Op<K>) -> String {
    if op.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (m, c) in op.terms() {
        let ct = alg.field().coeff_text(c);
        if out.is_empty() {
            if ct.negative {
                out.push('-');
            }
        } else {
            out.push_str(if ct.negative { " - " } else { " + " });
        }
        let mono = monomial_text(m, names, alg.rank());
        if mono.is_empty() {
            out.push_str(&ct.body);
        } else if ct.body == "1" {
            out.push_str(&mono);
        } else {
            out.push_str(&ct.body);
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}
