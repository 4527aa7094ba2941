//! Exact dense linear algebra over a [`Field`].

use crate::field::Field;

pub type Matrix<K> = Vec<Vec<K>>;

pub fn zeros<K: Field>(rows: usize, cols: usize) -> Matrix<K> {
    vec![vec![K::zero(); cols]; rows]
}

pub fn identity<K: Field>(n: usize) -> Matrix<K> {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = K::one();
    }
    m
}

pub fn ncols<K>(m: &Matrix<K>) -> usize {
    m.first().map_or(0, |r| r.len())
}

pub fn transpose<K: Field>(m: &Matrix<K>) -> Matrix<K> {
    let c = ncols(m);
    (0..c).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn matmul<K: Field>(a: &Matrix<K>, b: &Matrix<K>) -> Matrix<K> {
    let (n, k, m) = (a.len(), ncols(a), ncols(b));
    assert_eq!(k, b.len(), "inner dimensions differ");
    let mut out: Matrix<K> = zeros(n, m);
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    out[i][j] = out[i][j].add(&a[i][l].mul(&b[l][j]));
                }
            }
        }
    }
    out
}

pub fn matvec<K: Field>(a: &Matrix<K>, v: &[K]) -> Vec<K> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(K::zero(), |acc, (x, y)| acc.add(&x.mul(y)))
        })
        .collect()
}

/// Reduces `m` to reduced row-echelon form in place and returns the pivot columns.
pub fn rref<K: Field>(m: &mut Matrix<K>) -> Vec<usize> {
    let rows = m.len();
    let cols = ncols(m);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for j in c..cols {
            m[r][j] = m[r][j].mul(&inv);
        }
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in c..cols {
                if !prow[j].is_zero() {
                    row[j] = row[j].sub(&f.mul(&prow[j]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<K: Field>(m: &Matrix<K>) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Basis of `{v : m v = 0}`, itself in reduced row-echelon form.
pub fn kernel<K: Field>(m: &Matrix<K>, cols: usize) -> Matrix<K> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let mut basis = Vec::new();
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![K::zero(); cols];
        v[free] = K::one();
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = a[row][free].neg();
        }
        basis.push(v);
    }
    rref(&mut basis);
    basis
}

/// Basis of `{w : w^T m = 0}` in reduced row-echelon form.
pub fn left_kernel<K: Field>(m: &Matrix<K>) -> Matrix<K> {
    kernel(&transpose(m), m.len())
}

/// One solution of `a x = b`, or `None` when the system is inconsistent.
pub fn solve<K: Field>(a: &Matrix<K>, b: &[K]) -> Option<Vec<K>> {
    let cols = ncols(a);
    let mut aug: Matrix<K> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![K::zero(); cols];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = aug[row][cols].clone();
    }
    Some(x)
}

pub fn inverse<K: Field>(a: &Matrix<K>) -> Option<Matrix<K>> {
    let n = a.len();
    if ncols(a) != n {
        return None;
    }
    let mut aug: Matrix<K> = a
        .iter()
        .zip(identity::<K>(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}
