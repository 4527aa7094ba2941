//! Univariate polynomials: exact gcd over the rationals and simultaneous
//! (Aberth) root finding over the complex numbers.

use crate::error::{Error, Result};
use crate::field::{Field, Rational, C64};
use crate::form::HomogeneousForm;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 200;

/// Coefficients from the constant term upward, without trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct UPoly<K>(pub Vec<K>);

impl<K: Field> UPoly<K> {
    pub fn new(mut c: Vec<K>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul(&K::from_i64(k as i64)))
                .collect(),
        )
    }

    pub fn rem(&self, other: &Self) -> Self {
        let dv = other.degree().expect("division by zero polynomial");
        let lead_inv = other.0[dv].inv().expect("leading coefficient");
        let mut r = self.0.clone();
        while r.len() > dv && !r.is_empty() {
            let top = r.len() - 1;
            let q = r[top].mul(&lead_inv);
            for k in 0..=dv {
                let idx = top - dv + k;
                r[idx] = r[idx].sub(&q.mul(&other.0[k]));
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        UPoly::new(r)
    }

    pub fn monic(&self) -> Self {
        match self.0.last() {
            None => self.clone(),
            Some(l) => {
                let inv = l.inv().expect("nonzero leading coefficient");
                UPoly(self.0.iter().map(|c| c.mul(&inv)).collect())
            }
        }
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

/// `g` has no repeated factor.
pub fn is_squarefree(g: &UPoly<Rational>) -> bool {
    match g.degree() {
        None => false,
        Some(0) => true,
        Some(_) => g.gcd(&g.derivative()).degree() == Some(0),
    }
}

/// Dehomogenization `G(1, u)` of a binary form, plus the multiplicity of the
/// root `(0, 1)` read off from the degree drop.
pub fn dehomogenize_binary<K: Field>(g: &HomogeneousForm<K>) -> (UPoly<K>, usize) {
    let e = g.degree() as usize;
    let mut c = vec![K::zero(); e + 1];
    for (exp, v) in g.terms() {
        c[exp[1] as usize] = v.clone();
    }
    let p = UPoly::new(c);
    let drop = e - p.degree().unwrap_or(0);
    (p, drop)
}

/// Square-free test for a binary form, exact over the rationals.
pub fn binary_squarefree(g: &HomogeneousForm<Rational>) -> Result<bool> {
    if g.nvars() != 2 {
        return Err(Error::Argument("square-free test expects a binary form".into()));
    }
    if g.is_zero() {
        return Err(Error::Argument("the zero form has no roots".into()));
    }
    let (p, drop) = dehomogenize_binary(g);
    Ok(drop <= 1 && is_squarefree(&p))
}

fn horner(c: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn backward_error(c: &[C64], z: C64) -> f64 {
    let (p, _) = horner(c, z);
    let r = z.norm();
    let scale: f64 = c.iter().rev().fold(0.0, |acc, a| acc * r + a.norm());
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

/// All roots of `sum_k c[k] u^k` with multiplicity (Aberth iteration).
pub fn aberth(c: &[C64], tol: f64, max_iter: usize) -> Result<Vec<C64>> {
    let mut c: Vec<C64> = c.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    if c.is_empty() {
        return Err(Error::Argument("the zero polynomial has no finite root set".into()));
    }
    let zeros = c.iter().take_while(|x| x.norm() == 0.0).count();
    let c = &c[zeros..];
    let m = c.len() - 1;
    let mut roots = vec![C64::new(0.0, 0.0); zeros];
    if m == 0 {
        return Ok(roots);
    }
    let lead = c[m];
    let monic: Vec<C64> = c.iter().map(|a| a / lead).collect();
    let radius = 1.0 + monic[..m].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut z: Vec<C64> = (0..m)
        .map(|k| C64::from_polar(radius * 0.5, 2.0 * std::f64::consts::PI * k as f64 / m as f64 + 0.4))
        .collect();
    let mut converged = false;
    for _ in 0..max_iter {
        let mut max_step: f64 = 0.0;
        for k in 0..m {
            let (p, dp) = horner(&monic, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: C64 = (0..m)
                .filter(|&j| j != k)
                .map(|j| C64::new(1.0, 0.0) / (z[k] - z[j]))
                .sum();
            let step = ratio / (C64::new(1.0, 0.0) - ratio * sum);
            if step.re.is_finite() && step.im.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if max_step <= tol || z.iter().all(|&r| backward_error(&monic, r) <= tol * 1e-3) {
            converged = true;
            break;
        }
    }
    let worst = z.iter().map(|&r| backward_error(&monic, r)).fold(0.0, f64::max);
    if !converged && worst > tol.sqrt() {
        return Err(Error::Numeric(format!(
            "root finder did not converge in {max_iter} iterations (backward error {worst:e})"
        )));
    }
    roots.extend(z);
    Ok(roots)
}

/// Projective roots `(alpha, beta)` of a binary form `G(y0, y1)`, normalized
/// to `alpha = 1` except for the point `(0, 1)`.
pub fn univariate_complex_roots<K: Field>(
    g: &HomogeneousForm<K>,
    tol: f64,
) -> Result<Vec<(C64, C64)>> {
    if g.nvars() != 2 {
        return Err(Error::Argument("expected a binary form".into()));
    }
    if g.is_zero() {
        return Err(Error::Argument("the zero form has no roots".into()));
    }
    let (p, drop) = dehomogenize_binary(g);
    let c: Vec<C64> = p.0.iter().map(|x| x.to_c64()).collect();
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let mut out: Vec<(C64, C64)> = if c.len() > 1 {
        aberth(&c, tol, MAX_ITERATIONS)?.into_iter().map(|u| (one, u)).collect()
    } else {
        Vec::new()
    };
    out.extend(std::iter::repeat_n((zero, one), drop));
    Ok(out)
}

/// Number of distinct values among `roots`, merging those closer than `tol`.
pub fn cluster_count(roots: &[(C64, C64)], tol: f64) -> usize {
    let mut reps: Vec<(C64, C64)> = Vec::new();
    for &(a, b) in roots {
        let same = |(c, d): &(C64, C64)| (a * d - b * c).norm() <= tol * (1.0 + b.norm() + d.norm());
        if !reps.iter().any(same) {
            reps.push((a, b));
        }
    }
    reps.len()
}
