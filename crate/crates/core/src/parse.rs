//! Text grammar for forms with rational coefficients.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := ['+' | '-'] factor (['*'] factor)*
//! factor := atom ['^' integer]
//! atom   := integer ['/' integer] | variable | '(' expr ')'
//! ```
//!
//! Variables are `x0, x1, ...`; the bare letters `x, y, z, w` stand for
//! `x0..x3`. The result must be homogeneous.

use crate::error::{Error, Result};
use crate::field::Rational;
use crate::form::Form;
use num::{BigInt, BigRational, One, Zero};
use std::collections::BTreeMap;

type Poly = BTreeMap<Vec<u32>, Rational>;

/// Parses a form; the variable count is the largest index plus one, raised to
/// `min_vars` when given.
pub fn parse_form(text: &str, min_vars: Option<usize>) -> Result<Form> {
    let chars: Vec<char> = text.chars().collect();
    let nvars = scan_nvars(&chars)?.max(min_vars.unwrap_or(1));
    let mut p = Parser {
        chars,
        pos: 0,
        nvars,
    };
    p.skip_ws();
    if p.pos == p.chars.len() {
        return Err(p.error("empty input"));
    }
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(p.error(&format!("unexpected character '{}'", p.chars[p.pos])));
    }
    let mut degrees = poly.keys().map(|e| e.iter().sum::<u32>());
    let degree = degrees.next().unwrap_or(0);
    if degrees.any(|d| d != degree) {
        return Err(Error::Parse {
            position: 0,
            message: "form is not homogeneous".into(),
        });
    }
    Form::from_terms(nvars, degree, poly)
}

fn var_letter(c: char) -> Option<usize> {
    match c {
        'x' => Some(0),
        'y' => Some(1),
        'z' => Some(2),
        'w' => Some(3),
        _ => None,
    }
}

fn scan_nvars(chars: &[char]) -> Result<usize> {
    let mut n = 1;
    let mut i = 0;
    while i < chars.len() {
        if let Some(idx) = var_letter(chars[i]) {
            let start = i + 1;
            let mut j = start;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let index = if chars[i] == 'x' && j > start {
                let s: String = chars[start..j].iter().collect();
                s.parse::<usize>().map_err(|_| Error::Parse {
                    position: start,
                    message: "variable index too large".into(),
                })?
            } else {
                idx
            };
            n = n.max(index + 1);
            i = if chars[i] == 'x' { j } else { start };
        } else {
            i += 1;
        }
    }
    Ok(n)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    nvars: usize,
}

impl Parser {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.into(),
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

    fn constant(&self, c: Rational) -> Poly {
        let mut p = Poly::new();
        if !c.is_zero() {
            p.insert(vec![0; self.nvars], c);
        }
        p
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            if c != '+' && c != '-' {
                break;
            }
            let t = self.term()?;
            acc = add(&acc, &t);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut sign = Rational::one();
        while let Some(c) = self.peek() {
            match c {
                '+' => self.pos += 1,
                '-' => {
                    sign = -sign;
                    self.pos += 1
                }
                _ => break,
            }
        }
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = mul(&acc, &f);
                }
                Some(c) if c.is_ascii_digit() || c == '(' || var_letter(c).is_some() => {
                    let f = self.factor()?;
                    acc = mul(&acc, &f);
                }
                _ => break,
            }
        }
        Ok(acc.into_iter().map(|(e, c)| (e, c * &sign)).collect())
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let k = self.integer()?;
            let k: u32 = k
                .try_into()
                .map_err(|_| self.error("exponent too large"))?;
            let mut acc = self.constant(Rational::one());
            for _ in 0..k {
                acc = mul(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut value = BigRational::from_integer(num);
                if self.peek() == Some('/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(self.error("zero denominator"));
                    }
                    value /= BigRational::from_integer(den);
                }
                Ok(self.constant(value))
            }
            Some(c) if var_letter(c).is_some() => {
                self.pos += 1;
                let mut index = var_letter(c).expect("checked");
                if c == 'x' && self.chars.get(self.pos).is_some_and(|d| d.is_ascii_digit()) {
                    let i = self.integer()?;
                    index = i.try_into().map_err(|_| self.error("bad variable index"))?;
                }
                let mut e = vec![0; self.nvars];
                e[index] = 1;
                let mut p = Poly::new();
                p.insert(e, Rational::one());
                Ok(p)
            }
            Some(c) => Err(self.error(&format!("unexpected character '{c}'"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

fn add(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (e, c) in b {
        let v = out.get(e).map_or_else(|| c.clone(), |x| x + c);
        if v.is_zero() {
            out.remove(e);
        } else {
            out.insert(e.clone(), v);
        }
    }
    out
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let t = Poly::from([(e, ca * cb)]);
            out = add(&out, &t);
        }
    }
    out
}
