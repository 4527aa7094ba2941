//! Sparse homogeneous forms and the apolarity action.

use crate::error::{Error, Result};
use crate::field::{Field, Rational, C64};
use crate::monomial::{self, Exponent, MonomialBasis};
use num::{BigInt, One};
use std::collections::BTreeMap;
use std::fmt;

/// A form of fixed degree with only nonzero coefficients stored.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousForm<K> {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Exponent, K>,
}

pub type Form = HomogeneousForm<Rational>;

/// Coefficient vector `(a_0, ..., a_n)` of `a_0 x_0 + ... + a_n x_n`.
pub type LinearForm<K> = Vec<K>;

impl<K: Field> HomogeneousForm<K> {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        HomogeneousForm {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a form from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(nvars: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, K)>,
    {
        let mut f = Self::zero(nvars, degree);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Argument(format!(
                    "exponent {e:?} has {} entries, expected {nvars}",
                    e.len()
                )));
            }
            if monomial::degree(&e) != degree {
                return Err(Error::Argument(format!(
                    "exponent {e:?} has degree {}, expected {degree}",
                    monomial::degree(&e)
                )));
            }
            f.add_term(e, c);
        }
        Ok(f)
    }

    pub fn monomial(nvars: usize, e: Exponent, c: K) -> Self {
        let degree = monomial::degree(&e);
        let mut f = Self::zero(nvars, degree);
        f.add_term(e, c);
        f
    }

    fn add_term(&mut self, e: Exponent, c: K) {
        let new = match self.terms.get(&e) {
            Some(old) => old.add(&c),
            None => c,
        };
        if new.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, new);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in lexicographically decreasing order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &K)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, e: &[u32]) -> K {
        self.terms.get(e).cloned().unwrap_or_else(K::zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let mut f = self.clone();
        for (e, c) in &other.terms {
            f.add_term(e.clone(), c.clone());
        }
        Ok(f)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&K::one().neg()))
    }

    pub fn scale(&self, c: &K) -> Self {
        let mut f = Self::zero(self.nvars, self.degree);
        for (e, a) in &self.terms {
            f.add_term(e.clone(), a.mul(c));
        }
        f
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::Argument("variable count mismatch".into()));
        }
        let mut f = Self::zero(self.nvars, self.degree + other.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                f.add_term(monomial::add(a, b), ca.mul(cb));
            }
        }
        Ok(f)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = HomogeneousForm::monomial(self.nvars, vec![0; self.nvars], K::one());
        for _ in 0..k {
            acc = acc.mul(self).expect("same variable count");
        }
        acc
    }

    pub fn evaluate(&self, point: &[K]) -> Result<K> {
        if point.len() != self.nvars {
            return Err(Error::Argument(format!(
                "point has {} coordinates, form has {} variables",
                point.len(),
                self.nvars
            )));
        }
        let mut total = K::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &a) in point.iter().zip(e) {
                for _ in 0..a {
                    t = t.mul(x);
                }
            }
            total = total.add(&t);
        }
        Ok(total)
    }

    /// `L^d` expanded with multinomial coefficients.
    pub fn power_of_linear(l: &[K], d: u32) -> Self {
        let nvars = l.len();
        let mut f = Self::zero(nvars, d);
        for e in monomial::monomials(nvars, d) {
            let mut c = K::from_bigint(&monomial::multinomial(&e));
            for (x, &a) in l.iter().zip(&e) {
                for _ in 0..a {
                    c = c.mul(x);
                }
            }
            f.add_term(e, c);
        }
        f
    }

    pub fn linear(l: &[K]) -> Self {
        Self::power_of_linear(l, 1)
    }

    /// Coefficients in the lexicographic monomial basis of the form's degree.
    pub fn to_dense(&self, basis: &MonomialBasis) -> Vec<K> {
        let mut v = vec![K::zero(); basis.len()];
        for (e, c) in &self.terms {
            v[basis.index_of(e).expect("monomial in basis")] = c.clone();
        }
        v
    }

    pub fn from_dense(basis: &MonomialBasis, v: &[K]) -> Self {
        let mut f = Self::zero(basis.nvars, basis.degree);
        for (e, c) in basis.list.iter().zip(v) {
            f.add_term(e.clone(), c.clone());
        }
        f
    }

    /// `F(x_0 -> images[0], ..., x_n -> images[n])` with each image a linear
    /// form in `new_nvars` variables.
    pub fn substitute(&self, images: &[LinearForm<K>], new_nvars: usize) -> Result<Self> {
        if images.len() != self.nvars || images.iter().any(|l| l.len() != new_nvars) {
            return Err(Error::Argument("substitution shape mismatch".into()));
        }
        let lin: Vec<Self> = images.iter().map(|l| Self::linear(l)).collect();
        let mut powers: Vec<Vec<Self>> = Vec::with_capacity(self.nvars);
        for l in &lin {
            let mut p = vec![Self::monomial(new_nvars, vec![0; new_nvars], K::one())];
            for k in 1..=self.degree as usize {
                let next = p[k - 1].mul(l)?;
                p.push(next);
            }
            powers.push(p);
        }
        let mut out = Self::zero(new_nvars, self.degree);
        for (e, c) in &self.terms {
            let mut t = Self::monomial(new_nvars, vec![0; new_nvars], c.clone());
            for (i, &a) in e.iter().enumerate() {
                if a > 0 {
                    t = t.mul(&powers[i][a as usize])?;
                }
            }
            out = out.add(&t)?;
        }
        Ok(out)
    }

    pub fn map<K2: Field>(&self, f: impl Fn(&K) -> K2) -> HomogeneousForm<K2> {
        let mut g = HomogeneousForm::zero(self.nvars, self.degree);
        for (e, c) in &self.terms {
            g.add_term(e.clone(), f(c));
        }
        g
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars || self.degree != other.degree {
            return Err(Error::Argument(format!(
                "forms live in different spaces: ({}, {}) vs ({}, {})",
                self.nvars, self.degree, other.nvars, other.degree
            )));
        }
        Ok(())
    }

    pub fn format_with(&self, var: char, fmt_coeff: impl Fn(&K) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (e, c)) in self.terms().enumerate() {
            let mono = monomial::format_monomial(e, var);
            let cs = fmt_coeff(c);
            let (neg, body) = match cs.strip_prefix('-') {
                Some(rest) if !rest.contains(['+', '-']) => (true, rest.to_string()),
                _ => (false, cs),
            };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let is_one = body == "1";
            let body = if body.contains(['+', '-']) {
                format!("({body})")
            } else {
                body
            };
            if mono == "1" {
                s.push_str(&body);
            } else if is_one {
                s.push_str(&mono);
            } else {
                s.push_str(&body);
                s.push_str(&mono);
            }
        }
        s
    }
}

/// `prod_i beta_i! / (beta_i - alpha_i)!`, assuming `alpha <= beta`.
fn falling(alpha: &[u32], beta: &[u32]) -> BigInt {
    let mut r = BigInt::one();
    for (&a, &b) in alpha.iter().zip(beta) {
        for k in 0..a {
            r *= b - k;
        }
    }
    r
}

/// `G ∘ F`: dual monomials act as constant-coefficient differential operators.
pub fn apolar_apply<K: Field>(
    g: &HomogeneousForm<K>,
    f: &HomogeneousForm<K>,
) -> Result<HomogeneousForm<K>> {
    if g.nvars != f.nvars {
        return Err(Error::Argument("variable count mismatch".into()));
    }
    if g.degree > f.degree {
        return Ok(HomogeneousForm::zero(f.nvars, 0));
    }
    let mut out = HomogeneousForm::zero(f.nvars, f.degree - g.degree);
    for (alpha, ga) in &g.terms {
        for (beta, fb) in &f.terms {
            if !monomial::divides(alpha, beta) {
                continue;
            }
            let rest: Exponent = beta.iter().zip(alpha).map(|(b, a)| b - a).collect();
            let c = K::from_bigint(&falling(alpha, beta)).mul(ga).mul(fb);
            out.add_term(rest, c);
        }
    }
    Ok(out)
}

pub fn format_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn format_c64(c: &C64) -> String {
    let clean = |x: f64| if x.abs() < 1e-14 { 0.0 } else { x };
    let (re, im) = (clean(c.re), clean(c.im));
    if im == 0.0 {
        format!("{re}")
    } else if re == 0.0 {
        format!("{im}i")
    } else {
        format!("{re}{}{}i", if im < 0.0 { "-" } else { "+" }, im.abs())
    }
}

impl fmt::Display for HomogeneousForm<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with('x', format_rational))
    }
}

impl HomogeneousForm<Rational> {
    pub fn to_c64(&self) -> HomogeneousForm<C64> {
        self.map(|c| c.to_c64())
    }
}
