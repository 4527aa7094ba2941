#![allow(dead_code)]

use rand::Rng;
use waring::{Field, Form, Rational};

pub fn int(v: i64) -> Rational {
    Rational::from_i64(v)
}

/// Random nonzero integer in `[-b, b]`.
pub fn nonzero<R: Rng>(rng: &mut R, b: i64) -> i64 {
    loop {
        let v = rng.gen_range(-b..=b);
        if v != 0 {
            return v;
        }
    }
}

/// `sum lambda_i L_i^d` with small random integer data.
pub fn power_sum<R: Rng>(rng: &mut R, nvars: usize, d: u32, r: usize, b: i64) -> (Form, Vec<Vec<Rational>>) {
    let mut f = Form::zero(nvars, d);
    let mut forms = Vec::new();
    for _ in 0..r {
        let l: Vec<Rational> = (0..nvars).map(|_| int(rng.gen_range(-b..=b))).collect();
        let lambda = int(nonzero(rng, 3));
        f = f.add(&Form::power_of_linear(&l, d).scale(&lambda)).expect("same space");
        forms.push(l);
    }
    (f, forms)
}

/// Random form with a handful of small integer terms.
pub fn sparse_form<R: Rng>(rng: &mut R, nvars: usize, d: u32, terms: usize) -> Form {
    let mons = waring::monomial::monomials(nvars, d);
    let mut f = Form::zero(nvars, d);
    for _ in 0..terms {
        let e = mons[rng.gen_range(0..mons.len())].clone();
        f = f.add(&Form::monomial(nvars, e, int(nonzero(rng, 5)))).expect("same space");
    }
    f
}

/// Largest coefficient ratio check used for floating decompositions.
pub fn relative_residual(f: &Form, dec: &waring::decomposition::WaringDecomposition) -> f64 {
    dec.residual / f.max_abs().max(1.0)
}

/// No three of the ternary linear forms are linearly dependent.
pub fn no_three_collinear(forms: &[Vec<Rational>]) -> bool {
    let det = |a: &[Rational], b: &[Rational], c: &[Rational]| {
        a[0].clone() * (b[1].clone() * c[2].clone() - b[2].clone() * c[1].clone())
            - a[1].clone() * (b[0].clone() * c[2].clone() - b[2].clone() * c[0].clone())
            + a[2].clone() * (b[0].clone() * c[1].clone() - b[1].clone() * c[0].clone())
    };
    let r = forms.len();
    (0..r).all(|i| {
        (i + 1..r).all(|j| (j + 1..r).all(|k| !Field::is_zero(&det(&forms[i], &forms[j], &forms[k]))))
    })
}

/// The binary linear forms are nonzero and pairwise non-proportional.
pub fn pairwise_distinct(forms: &[Vec<Rational>]) -> bool {
    let r = forms.len();
    (0..r).all(|i| {
        let a = &forms[i];
        !(Field::is_zero(&a[0]) && Field::is_zero(&a[1]))
            && (i + 1..r).all(|j| {
                let b = &forms[j];
                !Field::is_zero(&(a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone()))
            })
    })
}
