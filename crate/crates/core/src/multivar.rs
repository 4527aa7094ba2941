//! Decompositions of forms in three or more essential variables.
//!
//! Both the catalecticant method and the Hankel/eigenvector method run the
//! same pipeline on the dehomogenized moments `h_a = c_{(d-|a|, a)}`:
//! pick a monomial set `B` connected to one with every needed moment known,
//! form `H_0 = (h_{a+b})` and `H_i = (h_{a+b+e_i})`, check that the operators
//! `M_i = H_0^{-1} H_i` commute, and read the points off the eigenvectors of
//! `M^T`, which are the evaluations of `B` at the points.
//!
//! Only the known-moment regime is covered; no unknown moments are searched.

use crate::apolarity::{apolar_slice, catalecticant_rank, essential_variables, normalized_coeff};
use crate::decomposition::{from_linear_forms, WaringDecomposition};
use crate::error::{Error, Result};
use crate::field::{Field, Rational, C64};
use crate::form::{Form, HomogeneousForm};
use crate::linalg::{self, Matrix};
use crate::monomial::{self, Exponent};
use crate::roots::{is_squarefree, UPoly};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{HashMap, HashSet};

const MAX_CANDIDATE_SETS: usize = 200;
const MAX_COORDINATE_CHANGES: usize = 5;
const MAX_SHIFTS: usize = 10;

/// Dehomogenized moments of a form in `n + 1` variables, indexed by
/// exponents in the `n` affine variables `x_1..x_n`.
#[derive(Clone, Debug)]
pub struct HankelSystem {
    pub n: usize,
    pub degree: u32,
    h: HashMap<Exponent, Rational>,
}

impl HankelSystem {
    pub fn new(f: &Form) -> Self {
        let n = f.nvars() - 1;
        let d = f.degree();
        let mut h = HashMap::new();
        for a in affine_monomials(n, d) {
            let mut full = vec![d - monomial::degree(&a)];
            full.extend_from_slice(&a);
            h.insert(a, normalized_coeff(f, &full));
        }
        HankelSystem { n, degree: d, h }
    }

    /// `h_a`, or `None` when `|a|` exceeds the degree.
    pub fn moment(&self, a: &[u32]) -> Option<Rational> {
        self.h.get(a).cloned()
    }

    /// `(h_{a+b+shift})` with unknown moments as `None`.
    pub fn matrix(&self, rows: &[Exponent], cols: &[Exponent], shift: Option<usize>) -> Vec<Vec<Option<Rational>>> {
        rows.iter()
            .map(|a| {
                cols.iter()
                    .map(|b| {
                        let mut e = monomial::add(a, b);
                        if let Some(i) = shift {
                            e[i] += 1;
                        }
                        self.moment(&e)
                    })
                    .collect()
            })
            .collect()
    }

    /// The same matrix when every entry is known.
    pub fn known_matrix(&self, rows: &[Exponent], cols: &[Exponent], shift: Option<usize>) -> Option<Matrix<Rational>> {
        self.matrix(rows, cols, shift)
            .into_iter()
            .map(|r| r.into_iter().collect::<Option<Vec<_>>>())
            .collect()
    }
}

/// Monomials in `n` variables of degree at most `max_deg`, by degree and then
/// lexicographically decreasing.
pub fn affine_monomials(n: usize, max_deg: u32) -> Vec<Exponent> {
    if n == 0 {
        return vec![vec![]];
    }
    (0..=max_deg).flat_map(|k| monomial::monomials(n, k)).collect()
}

/// Every element is 1 or a variable times another element.
pub fn connected_to_one(b: &[Exponent]) -> bool {
    let set: HashSet<&Exponent> = b.iter().collect();
    b.iter().all(|e| {
        monomial::degree(e) == 0
            || (0..e.len()).any(|i| {
                e[i] > 0 && {
                    let mut p = e.clone();
                    p[i] -= 1;
                    set.contains(&p)
                }
            })
    })
}

#[derive(Clone, Debug)]
pub struct MultiplicationOperators {
    pub matrices: Vec<Matrix<Rational>>,
}

impl MultiplicationOperators {
    pub fn commute(&self) -> bool {
        let m = &self.matrices;
        (0..m.len()).all(|i| {
            (i + 1..m.len()).all(|j| linalg::matmul(&m[i], &m[j]) == linalg::matmul(&m[j], &m[i]))
        })
    }
}

/// `M_i = H_0^{-1} H_i`; fails when `H_0` is singular or the operators do not commute.
pub fn multiplication_operators(h0: &Matrix<Rational>, shifts: &[Matrix<Rational>]) -> Result<MultiplicationOperators> {
    let inv = linalg::inverse(h0)
        .ok_or_else(|| Error::MethodInapplicable("Hankel matrix is singular".into()))?;
    let ops = MultiplicationOperators {
        matrices: shifts.iter().map(|h| linalg::matmul(&inv, h)).collect(),
    };
    if !ops.commute() {
        return Err(Error::MethodInapplicable(
            "multiplication operators do not commute; the basis is smaller than the rank".into(),
        ));
    }
    Ok(ops)
}

/// Exact characteristic polynomial (Faddeev-LeVerrier), lowest degree first.
pub fn charpoly(a: &Matrix<Rational>) -> UPoly<Rational> {
    let n = a.len();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m: Matrix<Rational> = linalg::zeros(n, n);
    for k in 1..=n {
        let mut next = linalg::matmul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] = row[i].add(&coeffs[n - k + 1]);
        }
        m = next;
        let am = linalg::matmul(a, &m);
        let trace = (0..n).fold(Rational::zero(), |acc, i| acc.add(&am[i][i]));
        coeffs[n - k] = trace.neg().mul(&Rational::from_i64(k as i64).inv().expect("k > 0"));
    }
    UPoly::new(coeffs)
}

fn to_f64(m: &Matrix<Rational>) -> DMatrix<f64> {
    let n = m.len();
    let c = linalg::ncols(m);
    DMatrix::from_fn(n, c, |i, j| m[i][j].to_c64().re)
}

/// Joint eigenvectors of commuting operators, normalized so the coordinate
/// of the monomial `1` (index 0 of `B`) equals one.
pub fn joint_eigen(ops: &MultiplicationOperators, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<C64>>> {
    let r = ops.matrices.first().map_or(0, |m| m.len());
    if r == 0 {
        return Err(Error::Argument("no operators".into()));
    }
    let n = ops.matrices.len();
    for attempt in 0..MAX_SHIFTS {
        let t: Vec<i64> = if attempt == 0 {
            (0..n).map(|i| i64::from(i == 0)).collect()
        } else {
            (0..n).map(|_| rng.gen_range(-10..=10)).collect()
        };
        let mut combo: Matrix<Rational> = linalg::zeros(r, r);
        for (m, &ti) in ops.matrices.iter().zip(&t) {
            if ti == 0 {
                continue;
            }
            let c = Rational::from_i64(ti);
            for i in 0..r {
                for j in 0..r {
                    combo[i][j] = combo[i][j].add(&m[i][j].mul(&c));
                }
            }
        }
        if !is_squarefree(&charpoly(&combo)) {
            continue;
        }
        let a = to_f64(&linalg::transpose(&combo));
        let eigenvalues = a.clone().complex_eigenvalues();
        let ac: DMatrix<C64> = a.map(|x| C64::new(x, 0.0));
        let mut vectors = Vec::with_capacity(r);
        for lambda in eigenvalues.iter() {
            vectors.push(eigenvector_with_unit_head(&ac, *lambda)?);
        }
        return Ok(vectors);
    }
    Err(Error::Numeric(
        "repeated eigenvalues for every tried shift; the point set is not reduced".into(),
    ))
}

/// Solves `(A - lambda I) u = 0` with `u_0 = 1` in the least-squares sense.
fn eigenvector_with_unit_head(a: &DMatrix<C64>, lambda: C64) -> Result<Vec<C64>> {
    let r = a.nrows();
    if r == 1 {
        return Ok(vec![C64::new(1.0, 0.0)]);
    }
    let shifted = a - DMatrix::identity(r, r) * lambda;
    let rest = shifted.columns(1, r - 1).into_owned();
    let rhs = -shifted.column(0).into_owned();
    let svd = rest.svd(true, true);
    let tail: DVector<C64> = svd
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::Numeric(format!("eigenvector solve failed: {e}")))?;
    let mut u = vec![C64::new(1.0, 0.0)];
    u.extend(tail.iter().copied());
    Ok(u)
}

/// Largest violation of `u_{a+e_i} = u_a · u_{e_i}` over the pairs present in `B`.
pub fn multiplicative_defect(b: &[Exponent], u: &[C64]) -> f64 {
    let index: HashMap<&Exponent, usize> = b.iter().enumerate().map(|(k, e)| (e, k)).collect();
    let n = b.first().map_or(0, |e| e.len());
    let mut worst: f64 = 0.0;
    for (k, e) in b.iter().enumerate() {
        for i in 0..n {
            let unit = monomial::unit(n, i);
            let mut shifted = e.clone();
            shifted[i] += 1;
            if let (Some(&j), Some(&s)) = (index.get(&unit), index.get(&shifted)) {
                let diff = (u[s] - u[k] * u[j]).norm() / (1.0 + u[s].norm());
                worst = worst.max(diff);
            }
        }
    }
    worst
}

/// Everything the Hankel pipeline produced for a successful rank.
#[derive(Clone, Debug)]
pub struct HankelOutcome {
    pub decomposition: WaringDecomposition,
    pub basis: Vec<Exponent>,
    pub h0: Matrix<Rational>,
    pub shifts: Vec<Matrix<Rational>>,
    /// Evaluation vectors of `B`, one per point, in the coordinates used for
    /// the computation (after any coordinate change).
    pub eigenvectors: Vec<Vec<C64>>,
    /// First column of the coordinate change `x -> A x`; `e_0` when none was needed.
    pub coordinate_change: Vec<i64>,
}

/// Candidate sets `B ⊇ {1, x_1..x_n}` of size `r` within degree `max_deg`,
/// connected to one, enumerated in graded lexicographic order.
fn candidate_sets(n: usize, r: usize, max_deg: u32) -> Vec<Vec<Exponent>> {
    let pool = affine_monomials(n, max_deg);
    let base: Vec<Exponent> = pool.iter().take(n + 1).cloned().collect();
    if r < base.len() || r > pool.len() {
        return Vec::new();
    }
    let extra: Vec<Exponent> = pool[n + 1..].to_vec();
    let need = r - base.len();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn dfs(
        extra: &[Exponent],
        base: &[Exponent],
        need: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<Exponent>>,
    ) {
        if out.len() >= MAX_CANDIDATE_SETS {
            return;
        }
        if chosen.len() == need {
            let mut b = base.to_vec();
            b.extend(chosen.iter().map(|&k| extra[k].clone()));
            if connected_to_one(&b) {
                out.push(b);
            }
            return;
        }
        for k in start..extra.len() {
            if extra.len() - k < need - chosen.len() {
                break;
            }
            chosen.push(k);
            dfs(extra, base, need, k + 1, chosen, out);
            chosen.pop();
        }
    }
    dfs(&extra, &base, need, 0, &mut chosen, &mut out);
    out
}

/// Attempts rank `r` on a form whose variables are all essential.
fn hankel_attempt(
    f: &Form,
    r: usize,
    max_deg: u32,
    rng: &mut ChaCha8Rng,
) -> Result<Option<(Vec<Exponent>, Matrix<Rational>, Vec<Matrix<Rational>>, Vec<Vec<C64>>)>> {
    let sys = HankelSystem::new(f);
    let n = sys.n;
    let mut last_err = None;
    for b in candidate_sets(n, r, max_deg) {
        let Some(h0) = sys.known_matrix(&b, &b, None) else {
            continue;
        };
        let shifts: Option<Vec<Matrix<Rational>>> =
            (0..n).map(|i| sys.known_matrix(&b, &b, Some(i))).collect();
        let Some(shifts) = shifts else {
            continue;
        };
        let ops = match multiplication_operators(&h0, &shifts) {
            Ok(ops) => ops,
            Err(_) => continue,
        };
        match joint_eigen(&ops, rng) {
            Ok(vectors) => return Ok(Some((b, h0, shifts, vectors))),
            Err(e) => last_err = Some(e),
        }
    }
    match last_err {
        Some(e) => Err(e),
        None => Ok(None),
    }
}

/// `F(A x)` with `A = [a | e_1 .. e_n]`, i.e. `x_0 -> a_0 x_0`, `x_i -> a_i x_0 + x_i`.
fn change_coordinates(f: &Form, a: &[i64]) -> Result<Form> {
    let n = f.nvars();
    let images: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut l = vec![Rational::zero(); n];
            l[0] = Rational::from_i64(a[i]);
            if i > 0 {
                l[i] = Rational::one();
            }
            l
        })
        .collect();
    f.substitute(&images, n)
}

/// Maps a linear form found for `F(A x)` back to one for `F`: `l = A^{-T} l'`.
fn undo_coordinate_change(l: &[C64], a: &[i64]) -> Vec<C64> {
    let a0 = a[0] as f64;
    let mut out = l.to_vec();
    let mut first = l[0];
    for i in 1..l.len() {
        first -= l[i] * a[i] as f64;
    }
    out[0] = first / a0;
    out
}

fn run_pipeline(
    f: &Form,
    ranks: impl Iterator<Item = usize> + Clone,
    max_deg: impl Fn(u32) -> u32,
    tol: f64,
    seed: u64,
) -> Result<HankelOutcome> {
    let ev = essential_variables(f)?;
    if ev.m <= 2 {
        return Err(Error::MethodInapplicable(format!(
            "{} essential variables; use the binary suite",
            ev.m
        )));
    }
    let g = &ev.reduced;
    let d = g.degree();
    let n = ev.m - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last_err: Option<Error> = None;
    for change in 0..=MAX_COORDINATE_CHANGES {
        let a: Vec<i64> = if change == 0 {
            let mut e = vec![0; n + 1];
            e[0] = 1;
            e
        } else {
            let mut v: Vec<i64> = (0..=n).map(|_| rng.gen_range(-5..=5)).collect();
            if v[0] == 0 {
                v[0] = 1;
            }
            v
        };
        let gc = if change == 0 { g.clone() } else { change_coordinates(g, &a)? };
        for r in ranks.clone() {
            let attempt = match hankel_attempt(&gc, r, max_deg(d), &mut rng) {
                Ok(Some(x)) => x,
                Ok(None) => continue,
                Err(e) => {
                    last_err = Some(e);
                    continue;
                }
            };
            let (b, h0, shifts, vectors) = attempt;
            let forms: Vec<Vec<C64>> = vectors
                .iter()
                .map(|u| {
                    let mut l = vec![C64::new(1.0, 0.0)];
                    l.extend((1..=n).map(|i| u[i]));
                    let l = undo_coordinate_change(&l, &a);
                    ev.lift_linear(&l, |c: &Rational| c.to_c64())
                })
                .collect();
            match from_linear_forms(f, forms, tol) {
                Ok(decomposition) => {
                    return Ok(HankelOutcome {
                        decomposition,
                        basis: b,
                        h0,
                        shifts,
                        eigenvectors: vectors,
                        coordinate_change: a,
                    })
                }
                Err(e) => last_err = Some(e),
            }
        }
    }
    Err(last_err.unwrap_or_else(|| {
        Error::MethodInapplicable(
            "no admissible monomial basis with fully known moments; a Hankel extension would be required".into(),
        )
    }))
}

/// Hankel/eigenvector decomposition trying `r = m..=r_max`, where `m` is the
/// number of essential variables.
pub fn bcmt_decompose_detailed(f: &Form, r_max: usize, tol: f64, seed: u64) -> Result<HankelOutcome> {
    let m = essential_variables(f)?.m;
    run_pipeline(f, m..=r_max.max(m), |d| d / 2, tol, seed)
}

pub fn bcmt_decompose(f: &Form, r_max: usize, tol: f64) -> Result<WaringDecomposition> {
    Ok(bcmt_decompose_detailed(f, r_max, tol, crate::binary::DEFAULT_SEED)?.decomposition)
}

/// Catalecticant method: `r` is the rank of the most square catalecticant
/// `Cat_{k, d-k}` with `k = ceil(d/2)`, and the points are recovered from a
/// basis `B` of degree below `k`.
pub fn catalecticant_decompose_detailed(f: &Form, tol: f64, seed: u64) -> Result<HankelOutcome> {
    let ev = essential_variables(f)?;
    if ev.m <= 2 {
        return Err(Error::MethodInapplicable(format!(
            "{} essential variables; use the binary suite",
            ev.m
        )));
    }
    let d = f.degree();
    let k = d.div_ceil(2);
    let r = catalecticant_rank(f, k)?;
    let kernel = apolar_slice(f, k)?;
    let outcome = run_pipeline(f, std::iter::once(r), |_| k.saturating_sub(1), tol, seed).map_err(|e| match e {
        Error::Numeric(msg) => Error::Numeric(msg),
        other => Error::MethodInapplicable(format!("catalecticant method inapplicable: {other}")),
    })?;
    // the recovered points must lie on the variety cut out by the kernel
    for g in &kernel.basis {
        let gc: HomogeneousForm<C64> = g.to_c64();
        let scale = gc.max_abs().max(1.0);
        for l in &outcome.decomposition.linear_forms {
            let norm = l.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1.0);
            let v = gc.evaluate(l)?.norm() / (scale * norm.powi(k as i32));
            if v > 1e-6 {
                return Err(Error::MethodInapplicable(
                    "catalecticant method inapplicable: kernel does not vanish on the points".into(),
                ));
            }
        }
    }
    Ok(outcome)
}

pub fn catalecticant_decompose(f: &Form, tol: f64) -> Result<WaringDecomposition> {
    Ok(catalecticant_decompose_detailed(f, tol, crate::binary::DEFAULT_SEED)?.decomposition)
}

/// Joint eigenvalues of commuting operators, one tuple per simple eigenvalue
/// of a generic combination.
pub fn joint_eigenvalues(ops: &MultiplicationOperators, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<C64>>> {
    let r = ops.matrices.first().map_or(0, |m| m.len());
    if r == 0 {
        return Err(Error::Argument("no operators".into()));
    }
    let n = ops.matrices.len();
    for _ in 0..MAX_SHIFTS {
        let t: Vec<i64> = (0..n).map(|_| rng.gen_range(-10..=10)).collect();
        let mut combo: Matrix<Rational> = linalg::zeros(r, r);
        for (m, &ti) in ops.matrices.iter().zip(&t) {
            let c = Rational::from_i64(ti);
            for i in 0..r {
                for j in 0..r {
                    combo[i][j] = combo[i][j].add(&m[i][j].mul(&c));
                }
            }
        }
        if !is_squarefree(&charpoly(&combo)) {
            continue;
        }
        let a = to_f64(&combo);
        let ac: DMatrix<C64> = a.map(|x| C64::new(x, 0.0));
        let mats: Vec<DMatrix<C64>> = ops.matrices.iter().map(|m| to_f64(m).map(|x| C64::new(x, 0.0))).collect();
        let mut out = Vec::with_capacity(r);
        for mu in a.complex_eigenvalues().iter() {
            let shifted = &ac - DMatrix::identity(r, r) * *mu;
            let svd = shifted.svd(false, true);
            let v_t = svd.v_t.ok_or_else(|| Error::Numeric("singular vectors unavailable".into()))?;
            let k = (0..r)
                .min_by(|&x, &y| svd.singular_values[x].partial_cmp(&svd.singular_values[y]).expect("finite"))
                .expect("nonempty");
            let v: DVector<C64> = v_t.row(k).transpose().map(|c| c.conj());
            let norm = v.dotc(&v);
            out.push(mats.iter().map(|m| v.dotc(&(m * &v)) / norm).collect());
        }
        return Ok(out);
    }
    Err(Error::Numeric("repeated eigenvalues for every tried combination".into()))
}

/// Normal forms modulo a degree slice of an ideal: the slice in reduced
/// row-echelon form and its standard (non-pivot) monomials.
struct Slice {
    rows: Matrix<Rational>,
    pivots: Vec<usize>,
    standard: Vec<usize>,
}

impl Slice {
    fn new(generators: &[Form], t: u32, basis: &monomial::MonomialBasis) -> Result<Slice> {
        let n = basis.list.first().map_or(0, |e| e.len());
        let mut rows = Vec::new();
        for g in generators {
            for m in monomial::monomials(n, t - g.degree()) {
                rows.push(g.mul(&Form::monomial(n, m, Rational::one()))?.to_dense(basis));
            }
        }
        let pivots = if rows.is_empty() { Vec::new() } else { linalg::rref(&mut rows) };
        rows.truncate(pivots.len());
        let standard = (0..basis.len()).filter(|c| !pivots.contains(c)).collect();
        Ok(Slice { rows, pivots, standard })
    }

    fn normal_form(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = x.sub(&c.mul(y));
                }
            }
        }
        self.standard.iter().map(|&c| v[c].clone()).collect()
    }
}

/// Catalecticant method without a Hankel basis: the points are the zeros of
/// `F^⊥_k`, `k = ceil(d/2)`, found from multiplication matrices on the
/// quotient by the ideal generated by `F^⊥_k` in a degree where its Hilbert
/// function has stabilized at `r = rank Cat_{k, d-k}`.
pub fn kernel_points_decompose(f: &Form, tol: f64, seed: u64) -> Result<WaringDecomposition> {
    let ev = essential_variables(f)?;
    if ev.m <= 2 {
        return Err(Error::MethodInapplicable(format!("{} essential variables; use the binary suite", ev.m)));
    }
    let g = &ev.reduced;
    let nv = ev.m;
    let g = &HomogeneousForm::from_terms(
        nv,
        g.degree(),
        g.terms().map(|(e, c)| (e[..nv].to_vec(), c.clone())),
    )?;
    let d = g.degree();
    let k = d.div_ceil(2);
    let r = catalecticant_rank(g, k)?;
    let gens = apolar_slice(g, k)?.basis;
    let inapplicable = |why: &str| Error::MethodInapplicable(format!("catalecticant kernel method: {why}"));
    let mut found = None;
    for t in k..=k + 2 {
        let (bt, bt1) = (monomial::MonomialBasis::new(nv, t), monomial::MonomialBasis::new(nv, t + 1));
        let (st, st1) = (Slice::new(&gens, t, &bt)?, Slice::new(&gens, t + 1, &bt1)?);
        if st.standard.len() == r && st1.standard.len() == r {
            found = Some((bt, bt1, st, st1));
            break;
        }
    }
    let (bt, bt1, st, st1) = found.ok_or_else(|| inapplicable("the kernel does not cut out r points"))?;
    // A_j: multiplication by x_j from degree t to degree t + 1, on standard monomials
    let mult: Vec<Matrix<Rational>> = (0..nv)
        .map(|j| {
            let cols: Vec<Vec<Rational>> = st
                .standard
                .iter()
                .map(|&c| {
                    let mut e = bt.list[c].clone();
                    e[j] += 1;
                    let mut v = vec![Rational::zero(); bt1.len()];
                    v[bt1.index_of(&e).expect("degree t + 1 monomial")] = Rational::one();
                    st1.normal_form(v)
                })
                .collect();
            linalg::transpose(&cols)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last_err = inapplicable("no linear form avoids the points");
    for _ in 0..MAX_SHIFTS {
        let c: Vec<i64> = (0..nv).map(|_| rng.gen_range(-5..=5)).collect();
        let mut ell: Matrix<Rational> = linalg::zeros(r, r);
        for (a, &cj) in mult.iter().zip(&c) {
            let cj = Rational::from_i64(cj);
            for i in 0..r {
                for j in 0..r {
                    ell[i][j] = ell[i][j].add(&a[i][j].mul(&cj));
                }
            }
        }
        let Some(inv) = linalg::inverse(&ell) else { continue };
        let ops = MultiplicationOperators { matrices: mult.iter().map(|a| linalg::matmul(&inv, a)).collect() };
        if !ops.commute() {
            return Err(inapplicable("multiplication matrices do not commute"));
        }
        let points = match joint_eigenvalues(&ops, &mut rng) {
            Ok(p) => p,
            Err(e) => {
                last_err = e;
                continue;
            }
        };
        let forms: Vec<Vec<C64>> = points.iter().map(|p| ev.lift_linear(p, |c: &Rational| c.to_c64())).collect();
        match from_linear_forms(f, forms, tol) {
            Ok(dec) => return Ok(dec),
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, rat};
    use crate::parse::parse_form;

    pub const QUARTIC: &str = "3x^4+12x^2y^2+2y^4-12x^2yz+12xy^2z-4y^3z+12x^2z^2-12xyz^2+6y^2z^2-4yz^3+2z^4";

    pub const QUINTIC: &str = "-1549440x0x1x2^3 + 2417040x0x1^2x2^2 + 166320x0^2x1x2^2 - 829440x0x1^3x2 \
        - 5760x0^3x1x2 - 222480x0^2x1^2x2 + 38x0^5 - 497664x1^5 - 1107804x2^5 - 120x0^4x1 + 180x0^4x2 \
        + 12720x0^3x1^2 + 8220x0^3x2^2 - 34560x0^2x1^3 - 59160x0^2x2^3 + 831840x0x1^4 + 442590x0x2^4 \
        - 5591520x1^4x2 + 7983360x1^3x2^2 - 9653040x1^2x2^3 + 5116680x1x2^4";

    fn ints(rows: &[[i64; 4]]) -> Matrix<Rational> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn quintic_hankel_pipeline() {
        let f = parse_form(QUINTIC, None).unwrap();
        let out = bcmt_decompose_detailed(&f, 6, 1e-10, 1).unwrap();
        assert_eq!(out.basis, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0]]);
        assert_eq!(out.coordinate_change, vec![1, 0, 0]);
        assert_eq!(
            out.h0,
            ints(&[[38, -24, 36, 1272], [-24, 1272, -288, -3456], [36, -288, 822, -7416], [1272, -3456, -7416, 166368]])
        );
        assert_eq!(
            out.shifts[0],
            ints(&[
                [-24, 1272, -288, -3456],
                [1272, -3456, -7416, 166368],
                [-288, -7416, 5544, -41472],
                [-3456, 166368, -41472, -497664]
            ])
        );
        let mut vecs: Vec<Vec<f64>> = out.eigenvectors.iter().map(|v| v.iter().map(|c| c.re).collect()).collect();
        vecs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let want = [[1.0, -12.0, -3.0, 144.0], [1.0, -2.0, 3.0, 4.0], [1.0, 2.0, 3.0, 4.0], [1.0, 12.0, -13.0, 144.0]];
        for (v, w) in vecs.iter().zip(want) {
            for (a, b) in v.iter().zip(w) {
                assert!((a - b).abs() <= 1e-6 * b.abs().max(1.0));
            }
        }
        for v in &out.eigenvectors {
            assert!(multiplicative_defect(&out.basis, v) < 1e-8);
        }
        let ex = out.decomposition.exact.expect("integer points");
        let mut pairs: Vec<(Vec<Rational>, Rational)> = ex.linear_forms.into_iter().zip(ex.coefficients).collect();
        pairs.sort();
        let lambdas: Vec<Rational> = pairs.into_iter().map(|p| p.1).collect();
        // points sorted: (1,-12,-3), (1,-2,3), (1,2,3), (1,12,-13); verified exactly
        assert_eq!(lambdas, vec![int(5), int(15), int(15), int(3)]);
    }

    #[test]
    fn hankel_matrix_with_unknowns() {
        let f = parse_form("-4x0x1 + 2x0x2 + 2x1x2 + x2^2", None).unwrap();
        let sys = HankelSystem::new(&f);
        let b = affine_monomials(2, 2);
        let h = sys.matrix(&b, &b, None);
        let known = |row: &[Option<Rational>]| row.iter().map(|x| x.clone()).collect::<Vec<_>>();
        let top: Vec<Option<Rational>> = [0, -2, 1, 0, 1, 1].iter().map(|&x| Some(int(x))).collect();
        assert_eq!(known(&h[0]), top);
        assert_eq!(&h[1][..3], &[Some(int(-2)), Some(int(0)), Some(int(1))]);
        assert!(h[1][3..].iter().all(|x| x.is_none()));
        assert_eq!(&h[2][..3], &[Some(int(1)), Some(int(1)), Some(int(1))]);
        assert!(h[2][3..].iter().all(|x| x.is_none()));
    }

    #[test]
    fn connectivity() {
        let b = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0]];
        assert!(connected_to_one(&b));
        assert!(!connected_to_one(&[vec![0, 0], vec![2, 0]]));
    }

    #[test]
    fn charpoly_of_companion() {
        let m = vec![vec![int(0), int(-2)], vec![int(1), int(3)]];
        assert_eq!(charpoly(&m), UPoly::new(vec![int(2), int(-3), int(1)]));
    }

    #[test]
    fn ternary_quartic_by_catalecticant_method() {
        let f = parse_form(QUARTIC, None).unwrap();
        let out = catalecticant_decompose_detailed(&f, 1e-10, 1).unwrap();
        let ex = out.decomposition.exact.expect("rational points");
        assert_eq!(ex.coefficients, vec![int(1), int(1), int(1)]);
        let mut pts = ex.linear_forms.clone();
        pts.sort();
        let mut want = vec![
            vec![int(1), int(1), int(0)],
            vec![int(1), int(0), int(-1)],
            vec![int(1), int(-1), int(1)],
        ];
        want.sort();
        assert_eq!(pts, want);
    }

    #[test]
    fn fermat_cubic_needs_coordinate_change() {
        let f = parse_form("x0^3 + x1^3 + x2^3", None).unwrap();
        let dec = catalecticant_decompose(&f, 1e-10).unwrap();
        let ex = dec.exact.expect("coordinate points");
        assert_eq!(ex.coefficients.len(), 3);
        assert!(matches!(
            catalecticant_decompose(&parse_form("x0^2x1", Some(3)).unwrap(), 1e-10),
            Err(Error::MethodInapplicable(_))
        ));
    }

    #[test]
    fn points_on_a_conic_from_the_kernel() {
        // six points of the conic x0 x2 = x1^2 cannot use a Hankel basis of degree two
        let mut f = Form::zero(3, 6);
        for t in 0..6 {
            f = f.add(&Form::power_of_linear(&[int(1), int(t), int(t * t)], 6)).unwrap();
        }
        assert_eq!(catalecticant_rank(&f, 3).unwrap(), 6);
        assert!(catalecticant_decompose_detailed(&f, 1e-8, 1).is_err());
        let dec = kernel_points_decompose(&f, 1e-8, 1).unwrap();
        let ex = dec.exact.expect("integer points");
        assert_eq!(ex.coefficients, vec![int(1); 6]);
        let mut pts = ex.linear_forms;
        pts.sort();
        let mut want: Vec<Vec<Rational>> = (0..6).map(|t| vec![int(1), int(t), int(t * t)]).collect();
        want.sort();
        assert_eq!(pts, want);
    }

    #[test]
    fn perturbation_breaks_commutation() {
        let f = parse_form(QUARTIC, None).unwrap();
        let bump = Form::monomial(3, vec![2, 1, 1], rat(1, 1000));
        let g = f.add(&bump).unwrap();
        let b = affine_monomials(2, 1);
        for (form, commutes) in [(&f, true), (&g, false)] {
            let sys = HankelSystem::new(form);
            let h0 = sys.known_matrix(&b, &b, None).unwrap();
            let sh: Vec<_> = (0..2).map(|i| sys.known_matrix(&b, &b, Some(i)).unwrap()).collect();
            assert_eq!(multiplication_operators(&h0, &sh).is_ok(), commutes);
        }
    }
}
