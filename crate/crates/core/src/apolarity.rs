//! Catalecticant matrices, apolar ideals degree by degree, Hilbert functions
//! and essential variables.
//!
//! Catalecticant entries use the normalized coefficients `c_g` of
//! `F = sum_g multinomial(d; g) c_g x^g`, so `Cat_{i,d-i}(F)[a][b] = c_{a+b}`.
//! This differs from the raw apolarity matrix only by a column scaling, so
//! ranks and left kernels agree.

use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::form::{apolar_apply, HomogeneousForm, LinearForm};
use crate::linalg::{self, Matrix};
use crate::monomial::{self, MonomialBasis};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct CatalecticantMatrix<K> {
    pub i: u32,
    pub d: u32,
    pub rows: MonomialBasis,
    pub cols: MonomialBasis,
    pub entries: Matrix<K>,
}

impl<K: Field> CatalecticantMatrix<K> {
    pub fn rank(&self) -> usize {
        linalg::rank(&self.entries)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.cols.len())
    }

    pub fn to_csv(&self, fmt: impl Fn(&K) -> String) -> String {
        let label = |e: &[u32]| {
            let parts: Vec<String> = e.iter().map(|a| a.to_string()).collect();
            format!("\"({})\"", parts.join(","))
        };
        let mut s = String::from("\"\"");
        for b in &self.cols.list {
            s.push(',');
            s.push_str(&label(b));
        }
        s.push('\n');
        for (a, row) in self.rows.list.iter().zip(&self.entries) {
            s.push_str(&label(a));
            for x in row {
                s.push(',');
                s.push_str(&fmt(x));
            }
            s.push('\n');
        }
        s
    }
}

/// Normalized coefficient `c_g = coeff_g / multinomial(d; g)`.
pub fn normalized_coeff<K: Field>(f: &HomogeneousForm<K>, g: &[u32]) -> K {
    let c = f.coeff(g);
    if c.is_zero() {
        return c;
    }
    let m = K::from_bigint(&monomial::multinomial(g));
    c.mul(&m.inv().expect("multinomial is nonzero"))
}

pub fn catalecticant<K: Field>(f: &HomogeneousForm<K>, i: u32) -> Result<CatalecticantMatrix<K>> {
    let d = f.degree();
    if i > d {
        return Err(Error::Argument(format!("catalecticant index {i} exceeds degree {d}")));
    }
    let n = f.nvars();
    let rows = MonomialBasis::new(n, i);
    let cols = MonomialBasis::new(n, d - i);
    let entries = rows
        .list
        .iter()
        .map(|a| {
            cols.list
                .iter()
                .map(|b| normalized_coeff(f, &monomial::add(a, b)))
                .collect()
        })
        .collect();
    Ok(CatalecticantMatrix {
        i,
        d,
        rows,
        cols,
        entries,
    })
}

pub fn catalecticant_rank<K: Field>(f: &HomogeneousForm<K>, i: u32) -> Result<usize> {
    Ok(catalecticant(f, i)?.rank())
}

/// Degree-`i` part of the apolar ideal `F^⊥`.
#[derive(Clone, Debug)]
pub struct ApolarIdealSlice<K> {
    pub degree: u32,
    pub basis: Vec<HomogeneousForm<K>>,
}

impl<K: Field> ApolarIdealSlice<K> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Basis of `F^⊥_i` as dual forms, in reduced row-echelon form over the
/// lexicographic monomial order.
pub fn apolar_slice<K: Field>(f: &HomogeneousForm<K>, i: u32) -> Result<ApolarIdealSlice<K>> {
    let n = f.nvars();
    let rows = MonomialBasis::new(n, i);
    if i > f.degree() {
        let basis = (0..rows.len())
            .map(|k| {
                let mut v = vec![K::zero(); rows.len()];
                v[k] = K::one();
                HomogeneousForm::from_dense(&rows, &v)
            })
            .collect();
        return Ok(ApolarIdealSlice { degree: i, basis });
    }
    let cat = catalecticant(f, i)?;
    let kernel = linalg::left_kernel(&cat.entries);
    let basis = kernel
        .iter()
        .map(|v| HomogeneousForm::from_dense(&rows, v))
        .collect();
    Ok(ApolarIdealSlice { degree: i, basis })
}

/// `HF(A_F, i)` for `i = 0..=d`.
pub fn hilbert_function<K: Field>(f: &HomogeneousForm<K>) -> Result<Vec<usize>> {
    if f.is_zero() {
        return Err(Error::Argument("the zero form has no apolar algebra".into()));
    }
    (0..=f.degree()).map(|i| catalecticant_rank(f, i)).collect()
}

/// Length of the apolar algebra, the sum of its Hilbert function.
pub fn apolar_length<K: Field>(f: &HomogeneousForm<K>) -> Result<usize> {
    Ok(hilbert_function(f)?.iter().sum())
}

/// Dimension of `S_1 · V` inside degree `deg + 1`, for a list of dual forms of degree `deg`.
fn span_after_multiplying_by_variables<K: Field>(
    forms: &[HomogeneousForm<K>],
    nvars: usize,
    deg: u32,
) -> usize {
    if forms.is_empty() {
        return 0;
    }
    let target = MonomialBasis::new(nvars, deg + 1);
    let mut rows = Vec::with_capacity(forms.len() * nvars);
    for g in forms {
        for j in 0..nvars {
            let y = HomogeneousForm::monomial(nvars, monomial::unit(nvars, j), K::one());
            rows.push(g.mul(&y).expect("same variables").to_dense(&target));
        }
    }
    linalg::rank(&rows)
}

/// Number of minimal generators of `F^⊥` in each degree.
pub fn minimal_generator_degrees<K: Field>(f: &HomogeneousForm<K>) -> Result<BTreeMap<u32, usize>> {
    if f.is_zero() {
        return Err(Error::Argument("the zero form has no apolar ideal".into()));
    }
    let n = f.nvars();
    let mut out = BTreeMap::new();
    let mut prev: Vec<HomogeneousForm<K>> = Vec::new();
    for i in 1..=f.degree() + 1 {
        let slice = apolar_slice(f, i)?;
        let generated = span_after_multiplying_by_variables(&prev, n, i - 1);
        let new = slice.dim() - generated;
        if new > 0 {
            out.insert(i, new);
        }
        prev = slice.basis;
    }
    Ok(out)
}

/// Result of rewriting a form in its essential variables.
#[derive(Clone, Debug)]
pub struct EssentialVariables<K> {
    pub m: usize,
    /// `P` with `x = P z`; the last `n + 1 - m` columns span `F^⊥_1`.
    pub basis_change: Matrix<K>,
    /// `P^{-1}`, so that `z = P^{-1} x`.
    pub inverse: Matrix<K>,
    /// `F(P z)`, which only involves `z_0..z_{m-1}`.
    pub reduced: HomogeneousForm<K>,
}

impl<K: Field> EssentialVariables<K> {
    /// Rewrites a linear form in `z_0..z_{m-1}` as a linear form in the original variables.
    pub fn lift_linear<L: Field>(&self, l: &[L], convert: impl Fn(&K) -> L) -> LinearForm<L> {
        let nvars = self.inverse.len();
        (0..nvars)
            .map(|i| {
                l.iter()
                    .enumerate()
                    .fold(L::zero(), |acc, (j, c)| acc.add(&c.mul(&convert(&self.inverse[j][i]))))
            })
            .collect()
    }
}

pub fn essential_variables<K: Field>(f: &HomogeneousForm<K>) -> Result<EssentialVariables<K>> {
    if f.is_zero() {
        return Err(Error::Argument("the zero form has no essential variables".into()));
    }
    let n = f.nvars();
    let d = f.degree();
    let kernel: Matrix<K> = if d == 0 {
        linalg::identity(n)
    } else {
        let cat = catalecticant(f, 1)?;
        linalg::left_kernel(&cat.entries)
    };
    let m = n - kernel.len();
    // complete the kernel with standard basis vectors, greedily in index order
    let mut columns: Vec<Vec<K>> = Vec::new();
    let mut span = kernel.clone();
    for j in 0..n {
        if columns.len() == m {
            break;
        }
        let mut e = vec![K::zero(); n];
        e[j] = K::one();
        let mut trial = span.clone();
        trial.push(e.clone());
        if linalg::rank(&trial) == trial.len() {
            span = trial;
            columns.push(e);
        }
    }
    columns.extend(kernel);
    let p = linalg::transpose(&columns);
    let inverse = linalg::inverse(&p).expect("completed basis is invertible");
    let full = f.substitute(&p, n)?;
    let terms = full.terms().map(|(e, c)| {
        debug_assert!(e[m..].iter().all(|&a| a == 0));
        (e[..m].to_vec(), c.clone())
    });
    let reduced = HomogeneousForm::from_terms(m, d, terms.collect::<Vec<_>>())?;
    Ok(EssentialVariables {
        m,
        basis_change: p,
        inverse,
        reduced,
    })
}

/// Solves `F = sum_i lambda_i L_i^d` exactly; `None` when `F` is not in the span.
pub fn verify_apolar_points<K: Field>(
    f: &HomogeneousForm<K>,
    points: &[LinearForm<K>],
) -> Result<Option<Vec<K>>> {
    let n = f.nvars();
    if points.iter().any(|p| p.len() != n) {
        return Err(Error::Argument("point dimension differs from variable count".into()));
    }
    for (a, p) in points.iter().enumerate() {
        if p.iter().all(|c| c.is_zero()) {
            return Err(Error::Argument(format!("point {a} is zero")));
        }
        for q in &points[a + 1..] {
            if linalg::rank(&vec![p.clone(), q.clone()]) < 2 {
                return Err(Error::Argument("points are proportional".into()));
            }
        }
    }
    let basis = MonomialBasis::new(n, f.degree());
    let columns: Vec<Vec<K>> = points
        .iter()
        .map(|l| HomogeneousForm::power_of_linear(l, f.degree()).to_dense(&basis))
        .collect();
    let a = linalg::transpose(&columns);
    let target = f.to_dense(&basis);
    if points.is_empty() {
        return Ok(if f.is_zero() { Some(vec![]) } else { None });
    }
    Ok(linalg::solve(&a, &target))
}

/// Checks `G ∘ F = 0` for every basis element of a slice.
pub fn annihilates<K: Field>(slice: &ApolarIdealSlice<K>, f: &HomogeneousForm<K>) -> bool {
    slice
        .basis
        .iter()
        .all(|g| apolar_apply(g, f).map(|r| r.is_zero()).unwrap_or(false))
}

pub fn rational_csv(cat: &CatalecticantMatrix<Rational>) -> String {
    cat.to_csv(crate::form::format_rational)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, rat};
    use crate::parse::parse_form;

    fn ints(rows: &[&[i64]]) -> Matrix<Rational> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn binary_quartic_catalecticant() {
        let f = parse_form("2x0^4 - 4x0^3x1 + 30x0^2x1^2 - 28x0x1^3 + 17x1^4", None).unwrap();
        let cat = catalecticant(&f, 2).unwrap();
        assert_eq!(cat.entries, ints(&[&[2, -1, 5], &[-1, 5, -7], &[5, -7, 17]]));
        assert_eq!(cat.rank(), 2);
        let slice = apolar_slice(&f, 2).unwrap();
        assert_eq!(slice.dim(), 1);
        // 2y0^2 - y0y1 - y1^2 up to scale
        let g = &slice.basis[0];
        assert_eq!(g.coeff(&[1, 1]), rat(-1, 2));
        assert_eq!(g.coeff(&[0, 2]), rat(-1, 2));
        assert!(annihilates(&slice, &f));
    }

    #[test]
    fn catalecticant_shapes_and_ranks() {
        let f = parse_form("5x0^5x1", None).unwrap();
        let cat = catalecticant(&f, 2).unwrap();
        assert_eq!(cat.shape(), (3, 5));
        assert_eq!(cat.rank(), 2);
        let p = parse_form("x0^5", Some(3)).unwrap();
        for i in 0..=5 {
            assert_eq!(catalecticant_rank(&p, i).unwrap(), 1);
        }
        assert!(catalecticant(&p, 6).is_err());
    }

    #[test]
    fn monomial_apolar_ideals() {
        let f = parse_form("x0x1x2", None).unwrap();
        let slice = apolar_slice(&f, 2).unwrap();
        for j in 0..3 {
            let mut e = vec![0; 3];
            e[j] = 2;
            let g = HomogeneousForm::monomial(3, e, int(1));
            assert!(apolar_apply(&g, &f).unwrap().is_zero());
        }
        assert_eq!(slice.dim(), 3);
        assert_eq!(minimal_generator_degrees(&f).unwrap(), BTreeMap::from([(2, 3)]));
        assert_eq!(apolar_length(&f).unwrap(), 8);
        let g = parse_form("x0^2x1^2", None).unwrap();
        assert_eq!(minimal_generator_degrees(&g).unwrap(), BTreeMap::from([(3, 2)]));
        let h = parse_form("x0^4", Some(3)).unwrap();
        assert_eq!(
            minimal_generator_degrees(&h).unwrap(),
            BTreeMap::from([(1, 2), (5, 1)])
        );
        let m = parse_form("x0x1^2x2^3", None).unwrap();
        assert_eq!(hilbert_function(&m).unwrap(), vec![1, 3, 5, 6, 5, 3, 1]);
    }

    #[test]
    fn essential_variables_of_cubic_times_linear() {
        let f = parse_form("(x0+x1)^3x2", None).unwrap();
        let ev = essential_variables(&f).unwrap();
        assert_eq!(ev.m, 2);
        assert_eq!(ev.reduced.to_string(), "x0^3x1");
        let slice = apolar_slice(&f, 1).unwrap();
        assert_eq!(slice.dim(), 1);
        assert_eq!(slice.basis[0].coeff(&[1, 0, 0]), int(1));
        assert_eq!(slice.basis[0].coeff(&[0, 1, 0]), int(-1));
        // round trip: F(x) = reduced(P^{-1} x)
        let images: Vec<Vec<Rational>> = (0..ev.m).map(|j| ev.inverse[j].clone()).collect();
        assert_eq!(ev.reduced.substitute(&images, 3).unwrap(), f);
        let fermat = parse_form("x0^2+x1^2+x2^2", None).unwrap();
        assert_eq!(essential_variables(&fermat).unwrap().m, 3);
        let power = parse_form("(x0+x1)^5", None).unwrap();
        assert_eq!(essential_variables(&power).unwrap().m, 1);
    }

    #[test]
    fn apolar_points_membership() {
        let f = parse_form("2x0^4 - 4x0^3x1 + 30x0^2x1^2 - 28x0x1^3 + 17x1^4", None).unwrap();
        let pts = vec![vec![int(1), int(1)], vec![int(1), int(-2)]];
        assert_eq!(verify_apolar_points(&f, &pts).unwrap(), Some(vec![int(1), int(1)]));
        let g = parse_form("x0^3", Some(2)).unwrap();
        assert_eq!(verify_apolar_points(&g, &[vec![int(1), int(1)]]).unwrap(), None);
        let bad = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        assert!(verify_apolar_points(&f, &bad).is_err());
    }

    #[test]
    fn buczynska_cubic_hilbert_function() {
        let f = parse_form("x0^2x2 + 6x1^2x3 - 3(x0+x1)^2x4", None).unwrap();
        assert_eq!(hilbert_function(&f).unwrap(), vec![1, 5, 5, 1]);
    }
}
