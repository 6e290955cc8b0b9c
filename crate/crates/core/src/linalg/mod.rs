//! Exact linear algebra over a field and over the univariate ring `k[s]`.

mod minimal;
mod poly_matrix;

pub use minimal::{minimal_kernel, solve};

pub use poly_matrix::{LocalTorsion, PolyMatrix, Smith, TorsionError, TorsionModule};

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use crate::scalar::{FieldMode, Scalar};

/// Dense row-major matrix of scalars.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    mode: FieldMode,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl FieldMatrix {
    pub fn zeros(mode: FieldMode, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            mode,
            rows,
            cols,
            data: vec![Scalar::zero(mode); rows * cols],
        }
    }

    pub fn identity(mode: FieldMode, n: usize) -> Self {
        let mut m = Self::zeros(mode, n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one(mode);
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(mode: FieldMode, rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row);
        }
        FieldMatrix {
            mode,
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_i64(mode: FieldMode, rows: &[&[i64]]) -> Self {
        Self::from_rows(
            mode,
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from_i64(mode, v)).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(mode: FieldMode, rows: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(mode, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn mode(&self) -> FieldMode {
        self.mode
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.mode, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|s| s.is_zero())
    }

    pub fn mul(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.mode, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Scalar::zero(self.mode), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (FieldMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().unwrap();
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if !m[(r, j)].is_zero() {
                        m[(i, j)] = &m[(i, j)] - &(&f * &m[(r, j)]);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        // forward elimination only
        let mut m = self.clone();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().unwrap();
            for i in r + 1..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..m.cols {
                    if !m[(r, j)].is_zero() {
                        m[(i, j)] = &m[(i, j)] - &(&f * &m[(r, j)]);
                    }
                }
            }
            r += 1;
        }
        r
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Scalar::zero(self.mode); self.cols];
            v[free] = Scalar::one(self.mode);
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -&r[(row, free)];
            }
            basis.push(v);
        }
        basis
    }

    /// Determinant of a square matrix.
    pub fn determinant(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let mut det = Scalar::one(self.mode);
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                return Scalar::zero(self.mode);
            };
            if p != c {
                m.swap_rows(c, p);
                det = -&det;
            }
            det = &det * &m[(c, c)];
            let inv = m[(c, c)].inv().unwrap();
            for i in c + 1..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..m.cols {
                    if !m[(c, j)].is_zero() {
                        m[(i, j)] = &m[(i, j)] - &(&f * &m[(c, j)]);
                    }
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for FieldMatrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for FieldMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{} over {}]", self.rows, self.cols, self.mode)?;
        for i in 0..self.rows {
            let row: Vec<_> = self.row(i).iter().map(|s| s.to_text()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_full_rank() {
        let m = FieldMatrix::identity(FieldMode::Rational, 5);
        assert_eq!(m.rank(), 5);
        assert!(m.kernel_basis().is_empty());
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let q = FieldMode::Rational;
        let m = FieldMatrix::from_i64(q, &[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        assert_eq!(m.rank(), 2);
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 2);
        for v in ker {
            assert!(m.mul_vec(&v).iter().all(|s| s.is_zero()));
        }
    }

    #[test]
    fn determinant_by_elimination() {
        let q = FieldMode::Rational;
        let m = FieldMatrix::from_i64(q, &[&[0, 2, 1], &[3, 0, 0], &[1, 1, 1]]);
        // expansion along the second row: -3 * (2*1 - 1*1)
        assert_eq!(m.determinant(), Scalar::from_i64(q, -3));
    }

    #[test]
    fn rank_depends_on_characteristic() {
        // determinant 2^31 - 1
        let a = FieldMatrix::from_i64(FieldMode::Rational, &[&[2147483647, 0], &[0, 1]]);
        assert_eq!(a.rank(), 2);
        let p = FieldMatrix::from_i64(FieldMode::default_prime(), &[&[2147483647, 0], &[0, 1]]);
        assert_eq!(p.rank(), 1);
    }
}
