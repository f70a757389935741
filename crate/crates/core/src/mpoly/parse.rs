//! Text form of polynomials.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'x'digits | 't' | 'a' | '(' expr ')'
//! ```
//!
//! `t` is the indeterminate of `F_p[t]_(t)`; `a` names the generator of an
//! extension field and is treated as the same symbol. Division is allowed only
//! by expressions free of the `x` variables.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{MPoly, Monomial};
use crate::error::{Error, Result};
use crate::rings::Ring;

type TPoly = Vec<BigRational>;

fn t_trim(mut a: TPoly) -> TPoly {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn t_add(a: &[BigRational], b: &[BigRational]) -> TPoly {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    t_trim((0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect())
}

fn t_mul(a: &[BigRational], b: &[BigRational]) -> TPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    t_trim(out)
}

/// Intermediate value: `Σ c_m(t)·x^m / den(t)`.
#[derive(Clone, Debug)]
struct Value {
    num: BTreeMap<Monomial, TPoly>,
    den: TPoly,
}

impl Value {
    fn constant(nvars: usize, c: TPoly) -> Value {
        let mut num = BTreeMap::new();
        let c = t_trim(c);
        if !c.is_empty() {
            num.insert(Monomial::one(nvars), c);
        }
        Value { num, den: vec![BigRational::one()] }
    }

    fn x_free(&self) -> Option<TPoly> {
        match self.num.len() {
            0 => Some(Vec::new()),
            1 => {
                let (m, c) = self.num.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn scale_num(&self, c: &[BigRational]) -> BTreeMap<Monomial, TPoly> {
        self.num
            .iter()
            .map(|(m, a)| (m.clone(), t_mul(a, c)))
            .filter(|(_, a)| !a.is_empty())
            .collect()
    }

    fn add(&self, other: &Value) -> Value {
        let mut num = self.scale_num(&other.den);
        for (m, c) in other.scale_num(&self.den) {
            let e = num.entry(m).or_default();
            *e = t_add(e, &c);
        }
        num.retain(|_, c| !c.is_empty());
        Value { num, den: t_mul(&self.den, &other.den) }
    }

    fn neg(&self) -> Value {
        let num = self
            .num
            .iter()
            .map(|(m, c)| (m.clone(), c.iter().map(|x| -x).collect()))
            .collect();
        Value { num, den: self.den.clone() }
    }

    fn mul(&self, other: &Value) -> Value {
        let mut num: BTreeMap<Monomial, TPoly> = BTreeMap::new();
        for (ma, ca) in &self.num {
            for (mb, cb) in &other.num {
                let e = num.entry(ma.mul(mb)).or_default();
                *e = t_add(e, &t_mul(ca, cb));
            }
        }
        num.retain(|_, c| !c.is_empty());
        Value { num, den: t_mul(&self.den, &other.den) }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, pos: usize, msg: impl Into<String>) -> Error {
        Error::Parse { pos, msg: msg.into() }
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

    fn digits(&mut self) -> Option<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start)
            .then(|| (start, std::str::from_utf8(&self.src[start..self.pos]).unwrap()))
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let rhs = self.unary()?;
                    let c = rhs
                        .x_free()
                        .ok_or_else(|| self.err(at, "division by an expression in x"))?;
                    if c.is_empty() {
                        return Err(self.err(at, "division by zero"));
                    }
                    let num = acc.scale_num(&rhs.den);
                    acc = Value { num, den: t_mul(&acc.den, &c) };
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Value> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        if self.peek() == Some(b'+') {
            self.pos += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let (at, s) = self.digits().ok_or_else(|| self.err(self.pos, "expected exponent"))?;
        let e: u32 = s.parse().map_err(|_| self.err(at, "exponent too large"))?;
        let mut acc = Value::constant(self.nvars, vec![BigRational::one()]);
        for _ in 0..e {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Value> {
        let at = match self.peek() {
            None => return Err(self.err(self.src.len(), "unexpected end of input")),
            Some(_) => self.pos,
        };
        let c = self.src[at];
        if c.is_ascii_digit() {
            let (_, s) = self.digits().unwrap();
            let n: BigInt = s.parse().expect("digits");
            return Ok(Value::constant(self.nvars, vec![BigRational::from_integer(n)]));
        }
        match c {
            b'(' => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err(self.pos, "expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            b't' | b'a' => {
                self.pos += 1;
                Ok(Value::constant(self.nvars, vec![BigRational::zero(), BigRational::one()]))
            }
            b'x' => {
                self.pos += 1;
                let idx = match self.src.get(self.pos) {
                    Some(d) if d.is_ascii_digit() => self.digits().unwrap().1,
                    _ => return Err(self.err(self.pos, "expected variable index after 'x'")),
                };
                let i: usize = idx.parse().map_err(|_| self.err(at, "bad variable index"))?;
                if i >= self.nvars {
                    return Err(self.err(
                        at,
                        format!("variable x{i} outside x0..x{}", self.nvars.saturating_sub(1)),
                    ));
                }
                let mut num = BTreeMap::new();
                num.insert(Monomial::var(self.nvars, i), vec![BigRational::one()]);
                Ok(Value { num, den: vec![BigRational::one()] })
            }
            other => Err(self.err(at, format!("unexpected character '{}'", other as char))),
        }
    }
}

fn parse_value(nvars: usize, s: &str) -> Result<Value> {
    let mut p = Parser { src: s.as_bytes(), pos: 0, nvars };
    let v = p.expr()?;
    if let Some(c) = p.peek() {
        return Err(p.err(p.pos, format!("unexpected character '{}'", c as char)));
    }
    Ok(v)
}

/// Parses a polynomial in `x0 .. x{nvars-1}` with coefficients in `ring`.
pub fn parse_poly<R: Ring>(ring: &R, nvars: usize, s: &str) -> Result<MPoly<R>> {
    let v = parse_value(nvars, s)?;
    let mut out = MPoly::zero(ring, nvars);
    for (m, c) in v.num {
        let e = ring.from_t_fraction(&c, &v.den).ok_or_else(|| {
            Error::InvalidInput(format!("coefficient of {} is not an element of {}", fmt_mon(&m), ring.tag()))
        })?;
        out.add_term(m, e);
    }
    Ok(out)
}

/// Parses a single ring element (integer, `a/b`, or an expression in `t`).
pub fn parse_element<R: Ring>(ring: &R, s: &str) -> Result<R::Elem> {
    let p = parse_poly(ring, 0, s)?;
    Ok(p.constant_term())
}

fn fmt_mon(m: &Monomial) -> String {
    let parts: Vec<String> = m
        .exps()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// A coefficient prints bare when it is a signed integer or fraction.
fn is_plain_number(s: &str) -> bool {
    let body = s.strip_prefix('-').unwrap_or(s);
    let mut parts = body.splitn(2, '/');
    let ok = |p: Option<&str>| p.is_some_and(|p| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit()));
    let first = parts.next();
    match parts.next() {
        None => ok(first),
        Some(d) => ok(first) && ok(Some(d)),
    }
}

pub(super) fn format_poly<R: Ring>(p: &MPoly<R>) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (m, c) in p.terms().rev() {
        let cs = p.ring().format_elem(c);
        let (neg, body) = if is_plain_number(&cs) {
            match cs.strip_prefix('-') {
                Some(b) => (true, b.to_string()),
                None => (false, cs),
            }
        } else {
            (false, format!("({cs})"))
        };
        let term = if m.is_one() {
            body
        } else if body == "1" {
            fmt_mon(m)
        } else {
            format!("{body}*{}", fmt_mon(m))
        };
        match (out.is_empty(), neg) {
            (true, false) => out.push_str(&term),
            (true, true) => {
                out.push('-');
                out.push_str(&term);
            }
            (false, false) => {
                out.push_str(" + ");
                out.push_str(&term);
            }
            (false, true) => {
                out.push_str(" - ");
                out.push_str(&term);
            }
        }
    }
    out
}
