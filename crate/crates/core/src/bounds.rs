//! Closed-form ranks and certified rank bounds.

use crate::apolarity::{apolar_length, apolar_slice, catalecticant_rank, minimal_generator_degrees};
use crate::decomposition::{from_linear_forms, WaringDecomposition};
use crate::error::{Error, Result};
use crate::field::{Field, Rational, C64};
use crate::form::{apolar_apply, Form};
use crate::linalg;
use crate::monomial::{self, binomial, MonomialBasis};
use crate::secant::ah_oracle;
use serde::Serialize;

/// A rank known to lie in `[lower, upper]`; `upper` is `None` when unbounded here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RankInterval {
    pub lower: u64,
    pub upper: Option<u64>,
}

impl RankInterval {
    pub fn exact(r: u64) -> Self {
        RankInterval { lower: r, upper: Some(r) }
    }

    pub fn value(&self) -> Option<u64> {
        (self.upper == Some(self.lower)).then_some(self.lower)
    }
}

fn nonzero_exponents(alpha: &[u32]) -> Result<Vec<u32>> {
    let v: Vec<u32> = alpha.iter().copied().filter(|&a| a > 0).collect();
    if v.is_empty() {
        return Err(Error::Argument("a monomial of degree zero has no rank".into()));
    }
    Ok(v)
}

/// `prod (alpha_i + 1) / (alpha_0 + 1)` with `alpha_0` the smallest exponent.
/// Variables with exponent zero are dropped first.
pub fn monomial_rank(alpha: &[u32]) -> Result<u64> {
    let v = nonzero_exponents(alpha)?;
    let min = *v.iter().min().expect("nonempty");
    Ok(v.iter().map(|&a| u64::from(a) + 1).product::<u64>() / (u64::from(min) + 1))
}

/// Decomposition from the points of the apolar complete intersection
/// `(y_i^{a_i+1} - y_0^{a_i+1})`, where `y_0` carries the smallest exponent.
pub fn monomial_decomposition(alpha: &[u32], tol: f64) -> Result<WaringDecomposition> {
    nonzero_exponents(alpha)?;
    let n = alpha.len();
    let f = Form::monomial(n, alpha.to_vec(), Rational::one());
    let base = (0..n)
        .filter(|&i| alpha[i] > 0)
        .min_by_key(|&i| alpha[i])
        .expect("nonempty");
    let others: Vec<usize> = (0..n).filter(|&i| alpha[i] > 0 && i != base).collect();
    let mut forms: Vec<Vec<C64>> = vec![{
        let mut l = vec![C64::new(0.0, 0.0); n];
        l[base] = C64::new(1.0, 0.0);
        l
    }];
    for &j in &others {
        let m = alpha[j] + 1;
        let roots: Vec<C64> = (0..m)
            .map(|k| {
                // exact values on the real axis keep rational certificates possible
                match (2 * k).cmp(&m) {
                    std::cmp::Ordering::Equal => C64::new(-1.0, 0.0),
                    _ if k == 0 => C64::new(1.0, 0.0),
                    _ => C64::from_polar(1.0, 2.0 * std::f64::consts::PI * f64::from(k) / f64::from(m)),
                }
            })
            .collect();
        forms = forms
            .into_iter()
            .flat_map(|l| {
                roots.iter().map(move |&z| {
                    let mut l = l.clone();
                    l[j] = z;
                    l
                })
            })
            .collect();
    }
    from_linear_forms(&f, forms, tol)
}

/// Largest rank of a catalecticant of `F`.
pub fn catalecticant_lower(f: &Form) -> Result<u64> {
    let mut best = 0;
    for i in 0..=f.degree() {
        best = best.max(catalecticant_rank(f, i)?);
    }
    Ok(best as u64)
}

/// `ceil(length(A_F) / t)`, `t` the largest degree of a minimal generator of `F^⊥`.
pub fn ranestad_schreyer_lower(f: &Form) -> Result<u64> {
    let length = apolar_length(f)? as u64;
    let t = minimal_generator_degrees(f)?
        .keys()
        .copied()
        .max()
        .ok_or_else(|| Error::Argument("apolar ideal has no generators".into()))?;
    Ok(length.div_ceil(u64::from(t)))
}

/// `HF(R / ((G∘F)^⊥ + (G)), i)` for `i = 0..=deg F`, using `(F^⊥ : G) = (G∘F)^⊥`.
pub fn colon_hilbert_function(f: &Form, g: &Form) -> Result<Vec<u64>> {
    if g.is_zero() {
        return Err(Error::Argument("the colon form must be nonzero".into()));
    }
    if g.nvars() != f.nvars() {
        return Err(Error::Argument("variable count mismatch".into()));
    }
    let n = f.nvars();
    let e = g.degree();
    let h = apolar_apply(g, f)?;
    let mut out = Vec::new();
    for i in 0..=f.degree() {
        let basis = MonomialBasis::new(n, i);
        let mut rows: Vec<Vec<Rational>> = if h.is_zero() {
            Vec::new()
        } else {
            apolar_slice(&h, i)?.basis.iter().map(|q| q.to_dense(&basis)).collect()
        };
        if h.is_zero() {
            rows.extend(linalg::identity::<Rational>(basis.len()));
        }
        if i >= e {
            for m in monomial::monomials(n, i - e) {
                let q = g.mul(&Form::monomial(n, m, Rational::one()))?;
                rows.push(q.to_dense(&basis));
            }
        }
        let rank = if rows.is_empty() { 0 } else { linalg::rank(&rows) };
        out.push((basis.len() - rank) as u64);
    }
    Ok(out)
}

/// `ceil((1/e) sum_i HF(R / ((F^⊥ : G) + (G)), i))` for a dual form `G` of degree `e`.
pub fn colon_lower(f: &Form, g: &Form) -> Result<u64> {
    let total: u64 = colon_hilbert_function(f, g)?.iter().sum();
    Ok(total.div_ceil(u64::from(g.degree())))
}

/// The colon bound with a dual linear form `l`.
pub fn colon_e1_lower(f: &Form, l: &[Rational]) -> Result<u64> {
    if l.iter().all(|c| c.is_zero()) {
        return Err(Error::Argument("the dual linear form must be nonzero".into()));
    }
    colon_lower(f, &Form::linear(l))
}

/// The colon bound with `y_j` for the smallest exponent of a monomial.
pub fn monomial_colon_lower(alpha: &[u32]) -> Result<u64> {
    nonzero_exponents(alpha)?;
    let n = alpha.len();
    let j = (0..n).filter(|&i| alpha[i] > 0).min_by_key(|&i| alpha[i]).expect("nonempty");
    let f = Form::monomial(n, alpha.to_vec(), Rational::one());
    let mut l = vec![Rational::zero(); n];
    l[j] = Rational::one();
    colon_e1_lower(&f, &l)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UpperBounds {
    /// `C(n+d, d) - n`.
    pub landsberg_teitler: u64,
    /// `C(n+d-1, d-1) - C(n+d-5, d-3)`, for `d >= 3`.
    pub jelisiejew: Option<u64>,
    /// Twice the generic rank.
    pub blekherman_teitler: u64,
    pub generic_rank: u64,
}

impl UpperBounds {
    pub fn best(&self) -> u64 {
        [Some(self.landsberg_teitler), self.jelisiejew, Some(self.blekherman_teitler)]
            .into_iter()
            .flatten()
            .min()
            .expect("nonempty")
    }
}

/// Generic rank of degree-`d` forms in `n + 1` variables.
pub fn generic_waring_rank(n: u64, d: u32) -> Result<u64> {
    if d < 2 {
        return Ok(1);
    }
    let big_n = binomial((n + u64::from(d)) as i64, n as i64) - 1;
    (1..=big_n + 1)
        .find(|&s| ah_oracle(n, d, s).map(|r| r.0 == big_n).unwrap_or(false))
        .ok_or_else(|| Error::Numeric("generic rank not found".into()))
}

/// Upper bounds valid for every form of degree `d` in `n + 1` variables.
pub fn upper_bounds(n: u64, d: u32) -> Result<UpperBounds> {
    if d < 2 {
        return Err(Error::Argument("upper bounds need d >= 2".into()));
    }
    let (ni, di) = (n as i64, i64::from(d));
    let generic = generic_waring_rank(n, d)?;
    Ok(UpperBounds {
        landsberg_teitler: binomial(ni + di, di) - n,
        jelisiejew: (d >= 3).then(|| binomial(ni + di - 1, di - 1) - binomial(ni + di - 5, di - 3)),
        blekherman_teitler: 2 * generic,
        generic_rank: generic,
    })
}

/// Canonical reducible cubics that are not monomials up to coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CubicKind {
    /// `x_0 (x_0^2 + x_1^2 + ... + x_n^2)`
    FullSquares = 1,
    /// `x_0 (x_1^2 + ... + x_n^2)`
    OtherSquares = 2,
    /// `x_0 (x_0 x_1 + x_2 x_3 + x_4^2 + ... + x_n^2)`
    Mixed = 3,
}

impl TryFrom<u32> for CubicKind {
    type Error = Error;

    fn try_from(k: u32) -> Result<Self> {
        match k {
            1 => Ok(CubicKind::FullSquares),
            2 => Ok(CubicKind::OtherSquares),
            3 => Ok(CubicKind::Mixed),
            _ => Err(Error::Argument(format!("reducible cubic kind must be 1, 2 or 3, got {k}"))),
        }
    }
}

fn check_cubic(kind: CubicKind, n: usize) -> Result<()> {
    let min = if kind == CubicKind::Mixed { 3 } else { 2 };
    if n < min {
        return Err(Error::Argument(format!("kind {} needs n >= {min}", kind as u32)));
    }
    Ok(())
}

/// The canonical form itself, in `n + 1` variables.
pub fn reducible_cubic_form(kind: CubicKind, n: usize) -> Result<Form> {
    check_cubic(kind, n)?;
    let nv = n + 1;
    let sq = |i: usize| Form::monomial(nv, { let mut e = vec![0; nv]; e[i] = 2; e }, Rational::one());
    let prod = |i: usize, j: usize| Form::monomial(nv, { let mut e = vec![0; nv]; e[i] += 1; e[j] += 1; e }, Rational::one());
    let mut q = Form::zero(nv, 2);
    match kind {
        CubicKind::FullSquares => (0..=n).try_for_each(|i| { q = q.add(&sq(i))?; Ok::<_, Error>(()) })?,
        CubicKind::OtherSquares => (1..=n).try_for_each(|i| { q = q.add(&sq(i))?; Ok::<_, Error>(()) })?,
        CubicKind::Mixed => {
            q = prod(0, 1).add(&prod(2, 3))?;
            for i in 4..=n {
                q = q.add(&sq(i))?;
            }
        }
    }
    Form::linear(&{
        let mut l = vec![Rational::zero(); nv];
        l[0] = Rational::one();
        l
    })
    .mul(&q)
}

/// Complex rank of a canonical reducible cubic in `n + 1` variables.
pub fn reducible_cubic_rank(kind: CubicKind, n: usize) -> Result<u64> {
    check_cubic(kind, n)?;
    let n = n as u64;
    Ok(match kind {
        CubicKind::FullSquares | CubicKind::OtherSquares => 2 * n,
        CubicKind::Mixed => 2 * n + 1,
    })
}

/// Canonical real reducible cubics, with signs `±1`.
#[derive(Clone, Debug, PartialEq)]
pub enum RealCubic {
    /// `x_0 (sum_{i>=1} eps_i x_i^2)`; `eps` has length `n`.
    OtherSquares { eps: Vec<i8> },
    /// `x_0 (sum_{i>=0} eps_i x_i^2)`; `eps` has length `n + 1`.
    FullSquares { eps: Vec<i8> },
    /// `(alpha x_0 + x_p)(sum_{i<p} x_i^2 - sum_{i>=p} x_i^2)`.
    Shifted { n: usize, p: usize, alpha: Rational },
}

/// Real rank interval of a canonical real reducible cubic.
pub fn real_reducible_cubic_rank(c: &RealCubic) -> Result<RankInterval> {
    let signs_ok = |e: &[i8]| e.iter().all(|&x| x == 1 || x == -1);
    match c {
        RealCubic::OtherSquares { eps } => {
            if eps.len() < 2 || !signs_ok(eps) {
                return Err(Error::Argument("need n >= 2 signs of ±1".into()));
            }
            let n = eps.len() as u64;
            let sum: i64 = eps.iter().map(|&x| i64::from(x)).sum();
            Ok(if sum == 0 { RankInterval::exact(2 * n) } else { RankInterval { lower: 2 * n, upper: Some(2 * n + 1) } })
        }
        RealCubic::FullSquares { eps } => {
            if eps.len() < 3 || !signs_ok(eps) {
                return Err(Error::Argument("need n + 1 >= 3 signs of ±1".into()));
            }
            let n = (eps.len() - 1) as u64;
            let tail_equal = eps[1..].iter().all(|&x| x == eps[1]);
            Ok(if tail_equal && eps[0] == eps[1] {
                RankInterval::exact(2 * n)
            } else if tail_equal {
                RankInterval::exact(2 * n + 1)
            } else {
                RankInterval { lower: 2 * n, upper: Some(2 * n + 1) }
            })
        }
        RealCubic::Shifted { n, p, alpha } => {
            if *n < 2 || *p < 1 || p > n || alpha.is_zero() {
                return Err(Error::Argument("need n >= 2, 1 <= p <= n and alpha != 0".into()));
            }
            let n = *n as u64;
            let unit = alpha.abs() == Rational::one();
            Ok(RankInterval { lower: if unit { 2 * n + 1 } else { 2 * n }, upper: Some(2 * n + 3) })
        }
    }
}

/// Real rank of `x_0^{a_0} x_1^{a_1}`.
pub fn real_binary_monomial_rank(a0: u32, a1: u32) -> Result<u64> {
    if a0 == 0 || a1 == 0 {
        return Err(Error::Argument("both exponents must be positive".into()));
    }
    Ok(u64::from(a0) + u64::from(a1))
}

/// Real and complex ranks of a monomial agree exactly when its smallest exponent is one.
pub fn real_equals_complex(alpha: &[u32]) -> Result<bool> {
    Ok(*nonzero_exponents(alpha)?.iter().min().expect("nonempty") == 1)
}

/// What is known about the real rank of a monomial.
pub fn real_monomial_rank(alpha: &[u32]) -> Result<RankInterval> {
    let v = nonzero_exponents(alpha)?;
    let complex = monomial_rank(&v)?;
    if v.len() == 1 {
        return Ok(RankInterval::exact(1));
    }
    if v.len() == 2 {
        return Ok(RankInterval::exact(real_binary_monomial_rank(v[0], v[1])?));
    }
    if real_equals_complex(&v)? {
        return Ok(RankInterval::exact(complex));
    }
    let mut sorted = v.clone();
    sorted.sort_unstable();
    if sorted == [2, 2, 2] {
        return Ok(RankInterval { lower: 11, upper: Some(13) });
    }
    Ok(RankInterval { lower: complex + 1, upper: None })
}

/// Variables whose coordinate hyperplanes form the forbidden locus of a
/// monomial: those carrying the smallest exponent.
pub fn monomial_waring_locus(alpha: &[u32]) -> Result<Vec<usize>> {
    let min = *nonzero_exponents(alpha)?.iter().min().expect("nonempty");
    Ok((0..alpha.len()).filter(|&i| alpha[i] == min).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub lower: Vec<(String, u64)>,
    pub upper: Vec<(String, u64)>,
    pub exact: Option<u64>,
}

impl BoundReport {
    pub fn interval(&self) -> RankInterval {
        RankInterval {
            lower: self.lower.iter().map(|b| b.1).max().unwrap_or(1),
            upper: self.upper.iter().map(|b| b.1).min(),
        }
    }
}

/// Every bound that applies to `F`. Upper bounds use `m` variables, where
/// `m` is the number of essential variables.
pub fn bound_report(f: &Form, essential: usize) -> Result<BoundReport> {
    let mut lower = vec![
        ("catalecticant".to_string(), catalecticant_lower(f)?),
        ("ranestad-schreyer".to_string(), ranestad_schreyer_lower(f)?),
    ];
    let mut l = vec![Rational::zero(); f.nvars()];
    l[0] = Rational::one();
    lower.push(("colon e=1 with y0".to_string(), colon_e1_lower(f, &l)?));
    let mut upper = Vec::new();
    if f.degree() >= 2 && essential >= 1 {
        let ub = upper_bounds(essential as u64 - 1, f.degree())?;
        upper.push(("landsberg-teitler".to_string(), ub.landsberg_teitler));
        if let Some(j) = ub.jelisiejew {
            upper.push(("jelisiejew".to_string(), j));
        }
        upper.push(("blekherman-teitler".to_string(), ub.blekherman_teitler));
    }
    let mut report = BoundReport { lower, upper, exact: None };
    report.exact = report.interval().value();
    Ok(report)
}

use num::Signed;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::int;
    use crate::parse::parse_form;

    #[test]
    fn monomial_ranks_and_decompositions() {
        assert_eq!(monomial_rank(&[1, 1, 1]).unwrap(), 4);
        assert_eq!(monomial_rank(&[1, 2, 3]).unwrap(), 12);
        assert_eq!(monomial_rank(&[2, 2, 2]).unwrap(), 9);
        assert_eq!(monomial_rank(&[3, 0, 2]).unwrap(), 4);
        assert!(monomial_rank(&[0, 0]).is_err());
        let dec = monomial_decomposition(&[1, 1, 1], 1e-10).unwrap();
        assert_eq!(dec.len(), 4);
        assert!(dec.exact.is_some());
        let dec = monomial_decomposition(&[1, 2, 3], 1e-10).unwrap();
        assert_eq!(dec.len(), 12);
        assert!(dec.residual <= 1e-10);
        let ex = monomial_decomposition(&[1, 1], 1e-10).unwrap().exact.unwrap();
        let mut lams = ex.coefficients.clone();
        lams.sort();
        assert_eq!(lams, vec![crate::field::rat(-1, 4), crate::field::rat(1, 4)]);
    }

    #[test]
    fn lower_bounds_on_monomials() {
        let f = parse_form("x0x1x2", None).unwrap();
        let g = parse_form("x0x1^2x2^3", None).unwrap();
        assert_eq!(ranestad_schreyer_lower(&f).unwrap(), 4);
        assert_eq!(ranestad_schreyer_lower(&g).unwrap(), 6);
        assert_eq!(ranestad_schreyer_lower(&parse_form("x0^5", Some(3)).unwrap()).unwrap(), 1);
        let y0 = [int(1), int(0), int(0)];
        assert_eq!(colon_e1_lower(&g, &y0).unwrap(), 12);
        assert_eq!(colon_hilbert_function(&g, &Form::linear(&y0)).unwrap(), vec![1, 2, 3, 3, 2, 1, 0]);
        assert_eq!(colon_e1_lower(&f, &y0).unwrap(), 4);
        assert_eq!(colon_e1_lower(&parse_form("x0^4", Some(3)).unwrap(), &y0).unwrap(), 1);
    }

    #[test]
    fn quadric_colon_fixture() {
        let f = parse_form(
            "x0^11 - 22x0^9x1^2 + 33x0^7x1^4 - 22x0^9x2^2 + 396x0^7x1^2x2^2 - 462x0^5x1^4x2^2 \
             + 33x0^7x2^4 - 462x0^5x1^2x2^4 + 385x0^3x1^4x2^4",
            None,
        )
        .unwrap();
        let q = parse_form("x0^2 + x1^2 + x2^2", None).unwrap();
        assert_eq!(colon_lower(&f, &q).unwrap(), 25);
    }

    #[test]
    fn upper_bound_values() {
        assert_eq!(upper_bounds(1, 5).unwrap().landsberg_teitler, 5);
        let b = upper_bounds(2, 3).unwrap();
        assert!(b.best() >= 5);
        assert_eq!(b.jelisiejew, Some(5));
        assert_eq!(upper_bounds(2, 4).unwrap().blekherman_teitler, 12);
        assert_eq!(upper_bounds(2, 2).unwrap().jelisiejew, None);
    }

    #[test]
    fn cubics_and_real_ranks() {
        assert_eq!(reducible_cubic_rank(CubicKind::FullSquares, 3).unwrap(), 6);
        assert_eq!(reducible_cubic_rank(CubicKind::OtherSquares, 3).unwrap(), 6);
        assert_eq!(reducible_cubic_rank(CubicKind::Mixed, 3).unwrap(), 7);
        assert!(CubicKind::try_from(4).is_err());
        assert_eq!(reducible_cubic_form(CubicKind::Mixed, 3).unwrap().to_string(), "x0^2x1 + x0x2x3");
        let r = real_reducible_cubic_rank(&RealCubic::OtherSquares { eps: vec![1, -1, 1, -1] }).unwrap();
        assert_eq!(r.value(), Some(8));
        assert_eq!(real_binary_monomial_rank(1, 2).unwrap(), 3);
        assert_eq!(real_binary_monomial_rank(2, 2).unwrap(), 4);
        assert!(!real_equals_complex(&[2, 2]).unwrap());
        assert!(real_equals_complex(&[1, 2]).unwrap());
        assert_eq!(real_monomial_rank(&[2, 2, 2]).unwrap(), RankInterval { lower: 11, upper: Some(13) });
    }

    #[test]
    fn forbidden_loci() {
        assert_eq!(monomial_waring_locus(&[1, 2]).unwrap(), vec![0]);
        assert_eq!(monomial_waring_locus(&[1, 1, 1]).unwrap(), vec![0, 1, 2]);
        assert_eq!(monomial_waring_locus(&[2, 2, 2]).unwrap(), vec![0, 1, 2]);
    }
}
