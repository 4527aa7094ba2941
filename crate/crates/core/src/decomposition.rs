//! Waring decompositions `F = sum_i lambda_i L_i^d` and their verification.

use crate::apolarity::verify_apolar_points;
use crate::error::{Error, Result};
use crate::field::{rationalize, Field, Rational, C64};
use crate::form::{format_c64, format_rational, Form, HomogeneousForm};
use crate::monomial::MonomialBasis;
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

/// Exact certificate over the rationals; its residual is identically zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactDecomposition {
    pub coefficients: Vec<Rational>,
    pub linear_forms: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug)]
pub struct WaringDecomposition {
    pub nvars: usize,
    pub degree: u32,
    pub coefficients: Vec<C64>,
    pub linear_forms: Vec<Vec<C64>>,
    /// Present when the decomposition was verified with exact arithmetic.
    pub exact: Option<ExactDecomposition>,
    /// Largest coefficient magnitude of `F - sum lambda_i L_i^d`.
    pub residual: f64,
}

/// Serializable summary, coefficients rendered as strings.
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub rank: usize,
    pub exact: bool,
    pub coefficients: Vec<String>,
    pub linear_forms: Vec<Vec<String>>,
    pub residual: f64,
}

impl WaringDecomposition {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn reconstruct(&self) -> HomogeneousForm<C64> {
        let mut acc = HomogeneousForm::zero(self.nvars, self.degree);
        for (l, c) in self.linear_forms.iter().zip(&self.coefficients) {
            let t = HomogeneousForm::power_of_linear(l, self.degree).scale(c);
            acc = acc.add(&t).expect("same space");
        }
        acc
    }

    pub fn report(&self) -> DecompositionReport {
        match &self.exact {
            Some(ex) => DecompositionReport {
                rank: self.len(),
                exact: true,
                coefficients: ex.coefficients.iter().map(format_rational).collect(),
                linear_forms: ex
                    .linear_forms
                    .iter()
                    .map(|l| l.iter().map(format_rational).collect())
                    .collect(),
                residual: 0.0,
            },
            None => DecompositionReport {
                rank: self.len(),
                exact: false,
                coefficients: self.coefficients.iter().map(format_c64).collect(),
                linear_forms: self
                    .linear_forms
                    .iter()
                    .map(|l| l.iter().map(format_c64).collect())
                    .collect(),
                residual: self.residual,
            },
        }
    }

    /// Human-readable `lambda (L)^d + ...`.
    pub fn to_expression(&self) -> String {
        let r = self.report();
        let terms: Vec<String> = r
            .coefficients
            .iter()
            .zip(&r.linear_forms)
            .map(|(c, l)| {
                let lin: Vec<String> = l
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.as_str() != "0")
                    .map(|(i, a)| format!("({a})x{i}"))
                    .collect();
                format!("({c})*({})^{}", lin.join(" + "), self.degree)
            })
            .collect();
        terms.join(" + ")
    }

    pub fn from_exact(f: &Form, ex: ExactDecomposition) -> Self {
        WaringDecomposition {
            nvars: f.nvars(),
            degree: f.degree(),
            coefficients: ex.coefficients.iter().map(|c| c.to_c64()).collect(),
            linear_forms: ex
                .linear_forms
                .iter()
                .map(|l| l.iter().map(|c| c.to_c64()).collect())
                .collect(),
            exact: Some(ex),
            residual: 0.0,
        }
    }
}

/// Max-magnitude coefficient of `F - G`.
pub fn residual(f: &Form, g: &HomogeneousForm<C64>) -> f64 {
    f.to_c64().sub(g).expect("same space").max_abs()
}

/// Least-squares coefficients `lambda` with `F ≈ sum lambda_i L_i^d`.
pub fn solve_coefficients(f: &Form, forms: &[Vec<C64>]) -> Result<Vec<C64>> {
    let basis = MonomialBasis::new(f.nvars(), f.degree());
    let rows = basis.len();
    let cols = forms.len();
    if cols == 0 {
        return Ok(Vec::new());
    }
    let powers: Vec<Vec<C64>> = forms
        .iter()
        .map(|l| HomogeneousForm::power_of_linear(l, f.degree()).to_dense(&basis))
        .collect();
    // unit columns keep powers of forms of very different sizes comparable
    let norms: Vec<f64> = powers
        .iter()
        .map(|p| p.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE))
        .collect();
    let a = DMatrix::from_fn(rows, cols, |i, j| powers[j][i] / norms[j]);
    let b = DVector::from_iterator(rows, f.to_dense(&basis).iter().map(|c| c.to_c64()));
    let svd = a.svd(true, true);
    let x = svd
        .solve(&b, 1e-13)
        .map_err(|e| Error::Numeric(format!("coefficient solve failed: {e}")))?;
    Ok(x.iter().zip(&norms).map(|(c, n)| c / n).collect())
}

/// Tries to certify a numerical point set exactly: rationalize every
/// coordinate and solve for `lambda` over the rationals.
pub fn try_exact(f: &Form, forms: &[Vec<C64>]) -> Option<ExactDecomposition> {
    let mut rational_forms = Vec::with_capacity(forms.len());
    for l in forms {
        let mut r = Vec::with_capacity(l.len());
        for c in l {
            if c.im.abs() > 1e-9 * (1.0 + c.re.abs()) {
                return None;
            }
            r.push(rationalize(c.re, 1000, 1e-9)?);
        }
        rational_forms.push(r);
    }
    // canonical scaling: first nonzero coordinate of each form is one
    for l in rational_forms.iter_mut() {
        let lead = l.iter().find(|c| !c.is_zero())?.clone();
        let inv = lead.inv()?;
        l.iter_mut().for_each(|c| *c = c.mul(&inv));
    }
    let lambdas = verify_apolar_points(f, &rational_forms).ok()??;
    if lambdas.iter().any(|c| c.is_zero()) {
        return None;
    }
    Some(ExactDecomposition {
        coefficients: lambdas,
        linear_forms: rational_forms,
    })
}

/// Builds and verifies a decomposition from candidate linear forms.
/// The residual must not exceed `tol · max(1, |F|_∞)`.
pub fn from_linear_forms(f: &Form, forms: Vec<Vec<C64>>, tol: f64) -> Result<WaringDecomposition> {
    if let Some(ex) = try_exact(f, &forms) {
        return Ok(WaringDecomposition::from_exact(f, ex));
    }
    let coefficients = solve_coefficients(f, &forms)?;
    let mut dec = WaringDecomposition {
        nvars: f.nvars(),
        degree: f.degree(),
        coefficients,
        linear_forms: forms,
        exact: None,
        residual: 0.0,
    };
    dec.residual = residual(f, &dec.reconstruct());
    let bound = tol * f.max_abs().max(1.0);
    if dec.residual > bound {
        return Err(Error::Numeric(format!(
            "decomposition residual {:e} exceeds tolerance {bound:e}",
            dec.residual
        )));
    }
    Ok(dec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::int;
    use crate::parse::parse_form;

    #[test]
    fn exact_certificate_for_rational_points() {
        let f = parse_form("2x0^4 - 4x0^3x1 + 30x0^2x1^2 - 28x0x1^3 + 17x1^4", None).unwrap();
        let forms = vec![
            vec![C64::new(1.0, 0.0), C64::new(1.0 + 1e-13, 0.0)],
            vec![C64::new(1.0, 0.0), C64::new(-2.0, 0.0)],
        ];
        let dec = from_linear_forms(&f, forms, 1e-10).unwrap();
        let ex = dec.exact.as_ref().unwrap();
        assert_eq!(ex.coefficients, vec![int(1), int(1)]);
        assert_eq!(dec.residual, 0.0);
    }

    #[test]
    fn complex_points_give_numeric_decomposition() {
        // (x0 + i x1)^2 + (x0 - i x1)^2 = 2x0^2 - 2x1^2
        let f = parse_form("x0^2 - x1^2", None).unwrap();
        let forms = vec![
            vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0)],
            vec![C64::new(1.0, 0.0), C64::new(0.0, -1.0)],
        ];
        let dec = from_linear_forms(&f, forms, 1e-10).unwrap();
        assert!(dec.exact.is_none());
        for c in &dec.coefficients {
            assert!((c - C64::new(0.5, 0.0)).norm() < 1e-12);
        }
        let bad = vec![vec![C64::new(1.0, 0.0), C64::new(2.0, 0.0)]];
        assert!(from_linear_forms(&f, bad, 1e-10).is_err());
    }
}
