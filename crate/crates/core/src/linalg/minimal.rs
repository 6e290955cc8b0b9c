//! Low-degree kernel bases and solutions of polynomial systems, found by
//! linear algebra over the field on the coefficients of bounded degree.

use alloc::vec;
use alloc::vec::Vec;

use super::{FieldMatrix, PolyMatrix};
use crate::scalar::Scalar;
use crate::unipoly::UniPoly;

/// Coefficient `d` of every entry.
fn coefficient(m: &PolyMatrix, d: usize) -> FieldMatrix {
    let mut out = FieldMatrix::zeros(m.mode(), m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if let Some(c) = m[(i, j)].coeff(d) {
                out[(i, j)] = c.clone();
            }
        }
    }
    out
}

/// Block Toeplitz matrix of `x -> A x` for `x` of degree at most `delta`,
/// with `top + 1` block rows.
fn toeplitz(coeffs: &[FieldMatrix], delta: usize, top: usize) -> FieldMatrix {
    let (m, n) = (coeffs[0].rows(), coeffs[0].cols());
    let mut t = FieldMatrix::zeros(coeffs[0].mode(), m * (top + 1), n * (delta + 1));
    for e in 0..=top {
        for d in 0..=delta.min(e) {
            let Some(a) = coeffs.get(e - d) else { continue };
            for i in 0..m {
                for j in 0..n {
                    if !a[(i, j)].is_zero() {
                        t[(e * m + i, d * n + j)] = a[(i, j)].clone();
                    }
                }
            }
        }
    }
    t
}

fn assemble(v: &[Scalar], n: usize, delta: usize) -> Vec<UniPoly> {
    (0..n)
        .map(|j| UniPoly::from_coeffs((0..=delta).map(|d| v[d * n + j].clone()).collect()))
        .collect()
}

/// A minimal basis of the right kernel of `a`, as columns, given its rank.
/// `None` if the basis is not complete by degree `max_degree`.
pub fn minimal_kernel(a: &PolyMatrix, kernel_rank: usize, max_degree: usize) -> Option<PolyMatrix> {
    let (m, n) = (a.rows(), a.cols());
    let mode = a.mode();
    let mut basis: Vec<Vec<UniPoly>> = Vec::new();
    // leading coefficient vectors of the basis so far
    let mut leads: Vec<Vec<Scalar>> = Vec::new();
    if kernel_rank == 0 {
        return Some(PolyMatrix::zeros(mode, n, 0));
    }
    if m == 0 || a.is_zero() {
        return Some(PolyMatrix::identity(mode, n).col_block(0, kernel_rank.min(n)));
    }
    let da = a.max_degree().unwrap();
    let coeffs: Vec<FieldMatrix> = (0..=da).map(|d| coefficient(a, d)).collect();
    for delta in 0..=max_degree {
        let t = toeplitz(&coeffs, delta, delta + da);
        let mut rank = FieldMatrix::from_rows(mode, leads.clone()).rank();
        for v in t.kernel_basis() {
            let top: Vec<Scalar> = v[delta * n..].to_vec();
            if top.iter().all(|c| c.is_zero()) {
                continue;
            }
            let mut trial = leads.clone();
            trial.push(top.clone());
            let r = FieldMatrix::from_rows(mode, trial.clone()).rank();
            if r > rank {
                rank = r;
                leads = trial;
                basis.push(assemble(&v, n, delta));
                if basis.len() == kernel_rank {
                    let mut out = PolyMatrix::zeros(mode, n, kernel_rank);
                    for (j, col) in basis.into_iter().enumerate() {
                        for (i, p) in col.into_iter().enumerate() {
                            out[(i, j)] = p;
                        }
                    }
                    return Some(out);
                }
            }
        }
    }
    None
}

/// A solution `x` of `a x = b` of least degree, if one exists with degree at
/// most `max_degree`.
pub fn solve(a: &PolyMatrix, b: &PolyMatrix, max_degree: usize) -> Option<PolyMatrix> {
    let (m, n, k) = (a.rows(), a.cols(), b.cols());
    let mode = a.mode();
    let da = a.max_degree().unwrap_or(0);
    let db = b.max_degree().unwrap_or(0);
    let coeffs: Vec<FieldMatrix> = (0..=da).map(|d| coefficient(a, d)).collect();
    let bc: Vec<FieldMatrix> = (0..=db).map(|d| coefficient(b, d)).collect();
    for delta in 0..=max_degree {
        let top = (delta + da).max(db);
        let t = toeplitz(&coeffs, delta, top);
        let cols = t.cols();
        let mut aug = FieldMatrix::zeros(mode, t.rows(), cols + k);
        for i in 0..t.rows() {
            for j in 0..cols {
                aug[(i, j)] = t[(i, j)].clone();
            }
            let (e, r) = (i / m, i % m);
            if let Some(c) = bc.get(e) {
                for j in 0..k {
                    aug[(i, cols + j)] = c[(r, j)].clone();
                }
            }
        }
        let (red, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= cols) {
            continue;
        }
        let mut out = PolyMatrix::zeros(mode, n, k);
        for j in 0..k {
            let mut v = vec![Scalar::zero(mode); cols];
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = red[(row, cols + j)].clone();
            }
            for (i, p) in assemble(&v, n, delta).into_iter().enumerate() {
                out[(i, j)] = p;
            }
        }
        return Some(out);
    }
    None
}
