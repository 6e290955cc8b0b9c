//! Matrices over `k[s]` and their Smith normal form.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use thiserror::Error;

use super::FieldMatrix;
use crate::scalar::{FieldMode, Scalar};
use crate::unipoly::{Place, UniPoly};

#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    mode: FieldMode,
    rows: usize,
    cols: usize,
    data: Vec<UniPoly>,
}

/// `u * m * v = diag(factors)`, with `u`, `v` unimodular. Transforms are only
/// present when requested.
#[derive(Debug, Clone)]
pub struct Smith {
    /// Diagonal entries, length `min(rows, cols)`; nonzero ones monic and
    /// forming a divisibility chain, zeros last.
    pub factors: Vec<UniPoly>,
    pub u: Option<PolyMatrix>,
    pub u_inv: Option<PolyMatrix>,
    pub v: Option<PolyMatrix>,
    pub v_inv: Option<PolyMatrix>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.factors.iter().filter(|f| !f.is_zero()).count()
    }

    /// Invariant factors that are not units.
    pub fn nonunit_factors(&self) -> impl Iterator<Item = &UniPoly> {
        self.factors.iter().filter(|f| !f.is_zero() && !f.is_unit())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorsionError {
    #[error("cokernel has free rank {free_rank} ({rank} of {rows} rows generically independent)")]
    Nontorsion {
        rank: usize,
        rows: usize,
        free_rank: usize,
    },
}

/// Stalk data of a torsion module at one place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalTorsion {
    pub place: Place,
    /// Length over the base field: `deg(place) * sum(exponents)`.
    pub length: usize,
    /// Multiplicity of the place in each invariant factor, ascending.
    pub exponents: Vec<usize>,
}

/// Cokernel of a generically surjective map `k[s]^cols -> k[s]^rows`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionModule {
    pub invariant_factors: Vec<UniPoly>,
    pub points: Vec<LocalTorsion>,
    pub total_length: usize,
}

impl TorsionModule {
    pub fn length_at(&self, c: &Scalar) -> usize {
        self.points
            .iter()
            .find(|p| matches!(&p.place, Place::Point(x) if x == c))
            .map_or(0, |p| p.length)
    }

    pub fn is_zero(&self) -> bool {
        self.total_length == 0
    }
}

impl PolyMatrix {
    pub fn zeros(mode: FieldMode, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            mode,
            rows,
            cols,
            data: vec![UniPoly::zero(); rows * cols],
        }
    }

    pub fn identity(mode: FieldMode, n: usize) -> Self {
        let mut m = Self::zeros(mode, n, n);
        for i in 0..n {
            m[(i, i)] = UniPoly::one(mode);
        }
        m
    }

    pub fn from_rows(mode: FieldMode, rows: Vec<Vec<UniPoly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row);
        }
        PolyMatrix {
            mode,
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn diagonal(mode: FieldMode, entries: Vec<UniPoly>) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(mode, n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m[(i, i)] = e;
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

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.data.iter().filter_map(|p| p.degree()).max()
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

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
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

    /// Rows `range` as a new matrix.
    pub fn row_block(&self, start: usize, end: usize) -> PolyMatrix {
        PolyMatrix {
            mode: self.mode,
            rows: end - start,
            cols: self.cols,
            data: self.data[start * self.cols..end * self.cols].to_vec(),
        }
    }

    /// Columns `start..end` as a new matrix.
    pub fn col_block(&self, start: usize, end: usize) -> PolyMatrix {
        let mut m = Self::zeros(self.mode, self.rows, end - start);
        for i in 0..self.rows {
            for j in start..end {
                m[(i, j - start)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Evaluate every entry at `s = c`.
    pub fn specialize(&self, c: &Scalar) -> FieldMatrix {
        let mut m = FieldMatrix::zeros(self.mode, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].eval(c);
            }
        }
        m
    }

    /// Smith normal form with all four transforms.
    pub fn smith(&self) -> Smith {
        SmithRun::new(self, true).run()
    }

    /// Invariant factors only.
    pub fn invariant_factors(&self) -> Vec<UniPoly> {
        SmithRun::new(self, false).run().factors
    }

    /// Generic rank over the fraction field.
    pub fn generic_rank(&self) -> usize {
        self.invariant_factors()
            .iter()
            .filter(|f| !f.is_zero())
            .count()
    }

    /// Torsion data of the cokernel of `self: k[s]^cols -> k[s]^rows`.
    pub fn cokernel_torsion(&self) -> Result<TorsionModule, TorsionError> {
        torsion_from_factors(self.rows, self.invariant_factors())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += c * row[src]`.
    fn add_row(&mut self, dst: usize, src: usize, c: &UniPoly) {
        for j in 0..self.cols {
            let s = &self[(src, j)];
            if s.is_zero() {
                continue;
            }
            let add = c * s;
            self[(dst, j)] = &self[(dst, j)] + &add;
        }
    }

    /// `col[dst] += c * col[src]`.
    fn add_col(&mut self, dst: usize, src: usize, c: &UniPoly) {
        for i in 0..self.rows {
            let s = &self[(i, src)];
            if s.is_zero() {
                continue;
            }
            let add = c * s;
            self[(i, dst)] = &self[(i, dst)] + &add;
        }
    }

    fn scale_row(&mut self, i: usize, c: &Scalar) {
        for j in 0..self.cols {
            self[(i, j)] = self[(i, j)].scale(c);
        }
    }

    fn scale_col(&mut self, j: usize, c: &Scalar) {
        for i in 0..self.rows {
            self[(i, j)] = self[(i, j)].scale(c);
        }
    }
}

/// Group the non-unit invariant factors of a cokernel by place.
pub(crate) fn torsion_from_factors(
    rows: usize,
    factors: Vec<UniPoly>,
) -> Result<TorsionModule, TorsionError> {
    let rank = factors.iter().filter(|f| !f.is_zero()).count();
    if rank < rows {
        return Err(TorsionError::Nontorsion {
            rank,
            rows,
            free_rank: rows - rank,
        });
    }
    let mut points: Vec<LocalTorsion> = Vec::new();
    for f in factors.iter().filter(|f| !f.is_unit()) {
        for (place, mult) in f.places() {
            match points.iter_mut().find(|p| p.place == place) {
                Some(p) => p.exponents.push(mult),
                None => points.push(LocalTorsion {
                    place,
                    length: 0,
                    exponents: vec![mult],
                }),
            }
        }
    }
    for p in &mut points {
        p.exponents.sort_unstable();
        p.length = p.place.degree() * p.exponents.iter().sum::<usize>();
    }
    points.sort_by(|a, b| a.place.cmp(&b.place));
    let total_length = points.iter().map(|p| p.length).sum();
    Ok(TorsionModule {
        invariant_factors: factors,
        points,
        total_length,
    })
}

struct SmithRun {
    d: PolyMatrix,
    u: Option<PolyMatrix>,
    u_inv: Option<PolyMatrix>,
    v: Option<PolyMatrix>,
    v_inv: Option<PolyMatrix>,
}

impl SmithRun {
    fn new(m: &PolyMatrix, track: bool) -> Self {
        let id = |n| track.then(|| PolyMatrix::identity(m.mode, n));
        SmithRun {
            d: m.clone(),
            u: id(m.rows),
            u_inv: id(m.rows),
            v: id(m.cols),
            v_inv: id(m.cols),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        if let (Some(u), Some(ui)) = (&mut self.u, &mut self.u_inv) {
            u.swap_rows(a, b);
            ui.swap_cols(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        if let (Some(v), Some(vi)) = (&mut self.v, &mut self.v_inv) {
            v.swap_cols(a, b);
            vi.swap_rows(a, b);
        }
    }

    fn add_row(&mut self, dst: usize, src: usize, c: &UniPoly) {
        self.d.add_row(dst, src, c);
        if let (Some(u), Some(ui)) = (&mut self.u, &mut self.u_inv) {
            u.add_row(dst, src, c);
            ui.add_col(src, dst, &-c);
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, c: &UniPoly) {
        self.d.add_col(dst, src, c);
        if let (Some(v), Some(vi)) = (&mut self.v, &mut self.v_inv) {
            v.add_col(dst, src, c);
            vi.add_row(src, dst, &-c);
        }
    }

    fn scale_row(&mut self, i: usize, c: &Scalar) {
        self.d.scale_row(i, c);
        if let (Some(u), Some(ui)) = (&mut self.u, &mut self.u_inv) {
            u.scale_row(i, c);
            ui.scale_col(i, &c.inv().unwrap());
        }
    }

    /// Nonzero entry of least degree in the block `[k.., k..]`.
    fn min_entry(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in k..self.d.rows {
            for j in k..self.d.cols {
                let deg = self.d[(i, j)].degree_or_max();
                if deg != usize::MAX && best.is_none_or(|b| deg < b.2) {
                    best = Some((i, j, deg));
                    if deg == 0 {
                        return Some((i, j));
                    }
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn run(mut self) -> Smith {
        let n = self.d.rows.min(self.d.cols);
        for k in 0..n {
            let Some((pi, pj)) = self.min_entry(k) else {
                break;
            };
            self.swap_rows(k, pi);
            self.swap_cols(k, pj);
            loop {
                if !self.clear_column(k) {
                    continue;
                }
                if !self.clear_row(k) {
                    continue;
                }
                // every remaining entry must be divisible by the pivot
                if let Some(i) = self.nondivisible_row(k) {
                    self.add_row(k, i, &UniPoly::one(self.d.mode));
                    continue;
                }
                break;
            }
            let lc = self.d[(k, k)].leading().unwrap().inv().unwrap();
            self.scale_row(k, &lc);
        }
        let factors = (0..n).map(|i| self.d[(i, i)].clone()).collect();
        Smith {
            factors,
            u: self.u,
            u_inv: self.u_inv,
            v: self.v,
            v_inv: self.v_inv,
        }
    }

    /// Eliminate below the pivot. Returns false if a smaller pivot was moved
    /// into place instead.
    fn clear_column(&mut self, k: usize) -> bool {
        for i in k + 1..self.d.rows {
            if self.d[(i, k)].is_zero() {
                continue;
            }
            let (q, r) = self.d[(i, k)].div_rem(&self.d[(k, k)]);
            self.add_row(i, k, &-&q);
            if !r.is_zero() {
                self.swap_rows(k, i);
                return false;
            }
        }
        true
    }

    fn clear_row(&mut self, k: usize) -> bool {
        for j in k + 1..self.d.cols {
            if self.d[(k, j)].is_zero() {
                continue;
            }
            let (q, r) = self.d[(k, j)].div_rem(&self.d[(k, k)]);
            self.add_col(j, k, &-&q);
            if !r.is_zero() {
                self.swap_cols(k, j);
                return false;
            }
        }
        true
    }

    fn nondivisible_row(&self, k: usize) -> Option<usize> {
        let p = &self.d[(k, k)];
        if p.is_unit() {
            return None;
        }
        for i in k + 1..self.d.rows {
            for j in k + 1..self.d.cols {
                if !p.divides(&self.d[(i, j)]) {
                    return Some(i);
                }
            }
        }
        None
    }
}

impl Index<(usize, usize)> for PolyMatrix {
    type Output = UniPoly;
    fn index(&self, (i, j): (usize, usize)) -> &UniPoly {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for PolyMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut UniPoly {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{} over {}[t]]", self.rows, self.cols, self.mode)?;
        for i in 0..self.rows {
            let row: Vec<_> = (0..self.cols)
                .map(|j| alloc::format!("{}", self[(i, j)]))
                .collect();
            writeln!(f, "  {}", row.join(" | "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldMode = FieldMode::Rational;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(c.iter().map(|&v| Scalar::from_i64(Q, v)).collect())
    }

    fn check(m: &PolyMatrix) -> Smith {
        let s = m.smith();
        let u = s.u.as_ref().unwrap();
        let v = s.v.as_ref().unwrap();
        let d = u.mul(m).mul(v);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let expect = if i == j { s.factors[i].clone() } else { UniPoly::zero() };
                assert_eq!(d[(i, j)], expect);
            }
        }
        assert_eq!(u.mul(s.u_inv.as_ref().unwrap()), PolyMatrix::identity(Q, m.rows()));
        assert_eq!(v.mul(s.v_inv.as_ref().unwrap()), PolyMatrix::identity(Q, m.cols()));
        s
    }

    #[test]
    fn diagonal_input() {
        let m = PolyMatrix::diagonal(Q, vec![p(&[0, 1]), p(&[0, 0, 1])]);
        assert_eq!(check(&m).factors, vec![p(&[0, 1]), p(&[0, 0, 1])]);
    }

    #[test]
    fn jordan_block() {
        let m = PolyMatrix::from_rows(Q, vec![vec![p(&[0, 1]), p(&[1])], vec![p(&[]), p(&[0, 1])]]);
        assert_eq!(check(&m).factors, vec![p(&[1]), p(&[0, 0, 1])]);
    }

    #[test]
    fn coprime_diagonal_merges() {
        let m = PolyMatrix::diagonal(Q, vec![p(&[-1, 1]), p(&[0, 1])]);
        assert_eq!(check(&m).factors, vec![p(&[1]), p(&[0, -1, 1])]);
    }

    #[test]
    fn torsion_at_zero() {
        let m = PolyMatrix::diagonal(Q, vec![p(&[1]), p(&[1]), p(&[0, 0, 0, 1])]);
        let t = m.cokernel_torsion().unwrap();
        assert_eq!(t.total_length, 3);
        assert_eq!(t.length_at(&Scalar::zero(Q)), 3);
        assert_eq!(t.points.len(), 1);
    }

    #[test]
    fn nontorsion_flagged() {
        let m = PolyMatrix::from_rows(Q, vec![vec![p(&[0, 1])], vec![p(&[1, 1])]]);
        assert_eq!(
            m.cokernel_torsion().unwrap_err(),
            TorsionError::Nontorsion {
                rank: 1,
                rows: 2,
                free_rank: 1
            }
        );
    }

    #[test]
    fn rectangular_with_zero_column() {
        let m = PolyMatrix::from_rows(
            Q,
            vec![
                vec![p(&[0, 1]), p(&[]), p(&[0, 2])],
                vec![p(&[]), p(&[]), p(&[])],
            ],
        );
        let s = check(&m);
        assert_eq!(s.rank(), 1);
        assert_eq!(s.factors, vec![p(&[0, 1]), p(&[])]);
    }
}
