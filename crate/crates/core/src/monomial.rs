//! Monomial exponents, their lexicographic enumeration, and integer combinatorics.

use num::BigInt;
use std::collections::HashMap;

pub type Exponent = Vec<u32>;

pub fn degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

/// All exponents of total degree `d` in `nvars` variables, lexicographically
/// decreasing (`x0^d` first).
pub fn monomials(nvars: usize, d: u32) -> Vec<Exponent> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fill(&mut out, &mut cur, 0, d);
    out
}

fn fill(out: &mut Vec<Exponent>, cur: &mut Vec<u32>, pos: usize, left: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(cur.clone());
        return;
    }
    if cur.is_empty() {
        return;
    }
    for a in (0..=left).rev() {
        cur[pos] = a;
        fill(out, cur, pos + 1, left - a);
    }
    cur[pos] = 0;
}

/// Bijective index for the monomials of one degree.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    pub nvars: usize,
    pub degree: u32,
    pub list: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
}

impl MonomialBasis {
    pub fn new(nvars: usize, degree: u32) -> Self {
        let list = monomials(nvars, degree);
        let index = list.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        MonomialBasis {
            nvars,
            degree,
            list,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn index_of(&self, e: &[u32]) -> Option<usize> {
        self.index.get(e).copied()
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * k)
}

/// `d! / (a_0! ... a_n!)`.
pub fn multinomial(e: &[u32]) -> BigInt {
    let d = degree(e);
    e.iter().fold(factorial(d), |acc, &a| acc / factorial(a))
}

/// Binomial coefficient with `C(a, b) = 0` whenever `a < b` or `a < 0`.
pub fn binomial(a: i64, b: i64) -> u64 {
    if b < 0 || a < 0 || a < b {
        return 0;
    }
    let b = b.min(a - b) as u64;
    let a = a as u64;
    let mut r: u128 = 1;
    for k in 0..b {
        r = r * (a - k) as u128 / (k + 1) as u128;
    }
    r as u64
}

/// Number of monomials of degree `d` in `n + 1` variables.
pub fn count(n: usize, d: u32) -> usize {
    binomial(n as i64 + d as i64, n as i64) as usize
}

/// `x^alpha` divides `x^beta`.
pub fn divides(alpha: &[u32], beta: &[u32]) -> bool {
    alpha.iter().zip(beta).all(|(a, b)| a <= b)
}

pub fn add(a: &[u32], b: &[u32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn unit(nvars: usize, j: usize) -> Exponent {
    let mut e = vec![0; nvars];
    e[j] = 1;
    e
}

/// Human-readable monomial such as `x0^2x1`.
pub fn format_monomial(e: &[u32], var: char) -> String {
    let mut s = String::new();
    for (i, &a) in e.iter().enumerate() {
        match a {
            0 => {}
            1 => s.push_str(&format!("{var}{i}")),
            _ => s.push_str(&format!("{var}{i}^{a}")),
        }
    }
    if s.is_empty() {
        s.push('1');
    }
    s
}
