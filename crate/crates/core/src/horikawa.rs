//! The modules `R_k`, `K_2`, `K_3` of a fibration on both charts of the base,
//! the cokernel `F` of `mu: K_2 (x) R_1 -> K_3`, the Koszul cohomology sheaves
//! `K_{0,3}` and `K_{1,2}`, and the slope identity.
//!
//! On a chart with coordinate `s` the degree `k` forms in `x0..x4` are the
//! free module `k[s]^N`. The Pfaffian multiples of degree `k` span the ideal
//! part `I_k`. Its invariant factors decide flatness; a unimodular frame
//! `[B | L]` with inverse `[C; P]` then gives a basis `B` of `I_k`,
//! coordinates `C` on it, the projection `P` onto the free quotient `R_k` and
//! lifts `L` of its basis. Minimal polynomial bases keep the frame of low
//! degree.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::base::{BasePlace, BasePoint};
use crate::cohomology::{CohomologyError, FibrationInvariants, FreeComplex, FIBRE_GENUS};
use crate::linalg::{minimal_kernel, solve, PolyMatrix, TorsionModule};
use crate::pfaffian::PfaffianModel;
use crate::poly::{x_monomial_index, x_monomials, AmbientWeights, Chart};
use crate::scalar::{FieldMode, Scalar};
use crate::unipoly::UniPoly;

/// Expected rank of `R_k` for fibres of genus 5.
pub fn expected_rank(k: u32) -> usize {
    let g = FIBRE_GENUS as usize;
    match k {
        0 => 1,
        1 => g,
        _ => (2 * k as usize - 1) * (g - 1),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HorikawaError {
    #[error("the model has no entries")]
    EmptyModel,
    #[error("only degrees 1..=3 are built, asked for {0}")]
    DegreeOutOfRange(u32),
    #[error("Pfaffian {0} is not homogeneous in x")]
    NotHomogeneous(usize),
    #[error("R_{k} on chart {chart} has rank {found}, expected {expected}")]
    RankMismatch {
        k: u32,
        chart: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("R_{k} on chart {chart} has torsion: invariant factors {factors:?}")]
    NotFlat {
        k: u32,
        chart: &'static str,
        factors: Vec<String>,
    },
    #[error("{what} on chart {chart} is not torsion (free rank {free_rank})")]
    Nontorsion {
        what: &'static str,
        chart: &'static str,
        free_rank: usize,
    },
    #[error("the Koszul maps do not compose to zero on chart {0}")]
    NotAComplex(&'static str),
    #[error("{what} differs between the charts at {place}: {first} vs {second}")]
    ChartMismatch {
        what: &'static str,
        place: String,
        first: usize,
        second: usize,
    },
    #[error("gluing R_{0}: the lattices at infinity could not be compared")]
    Gluing(u32),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

/// One graded piece of the quotient on one chart.
#[derive(Debug, Clone)]
pub struct ChartModule {
    pub chart: Chart,
    pub degree: u32,
    pub monomials: Vec<[u32; 5]>,
    /// Rank of `I_k`.
    pub ideal_rank: usize,
    /// Rank of `R_k`.
    pub rank: usize,
    ideal_coords: PolyMatrix,
    ideal_basis: PolyMatrix,
    projection: PolyMatrix,
    lifts: PolyMatrix,
}

fn apply(m: &PolyMatrix, v: &[UniPoly]) -> Vec<UniPoly> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols()).fold(UniPoly::zero(), |acc, j| {
                if v[j].is_zero() || m[(i, j)].is_zero() {
                    acc
                } else {
                    &acc + &(&m[(i, j)] * &v[j])
                }
            })
        })
        .collect()
}

fn column(m: &PolyMatrix, j: usize) -> Vec<UniPoly> {
    (0..m.rows()).map(|i| m[(i, j)].clone()).collect()
}

fn from_columns(mode: FieldMode, rows: usize, cols: &[Vec<UniPoly>]) -> PolyMatrix {
    let mut m = PolyMatrix::zeros(mode, rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, v) in c.iter().enumerate() {
            m[(i, j)] = v.clone();
        }
    }
    m
}

/// Product of forms of degrees `a` and `b`, given as coefficient vectors.
pub fn mul_forms(f: &[UniPoly], a: u32, g: &[UniPoly], b: u32) -> Vec<UniPoly> {
    let ma = x_monomials(a);
    let mb = x_monomials(b);
    let index = x_monomial_index(a + b);
    let mut out = vec![UniPoly::zero(); index.len()];
    for (i, fa) in f.iter().enumerate() {
        if fa.is_zero() {
            continue;
        }
        for (j, gb) in g.iter().enumerate() {
            if gb.is_zero() {
                continue;
            }
            let e: [u32; 5] = core::array::from_fn(|l| ma[i][l] + mb[j][l]);
            let k = index[&e];
            out[k] = &out[k] + &(fa * gb);
        }
    }
    out
}

/// `x_j` as a degree one form.
fn linear_form(mode: FieldMode, j: usize) -> Vec<UniPoly> {
    let mut v = vec![UniPoly::zero(); 5];
    v[j] = UniPoly::one(mode);
    v
}

impl ChartModule {
    pub fn mode(&self) -> FieldMode {
        self.projection.mode()
    }

    /// Image of a degree `k` form in `R_k`.
    pub fn project(&self, f: &[UniPoly]) -> Vec<UniPoly> {
        apply(&self.projection, f)
    }

    /// Coordinates of an element of `I_k` in the ideal basis.
    pub fn ideal_coordinates(&self, f: &[UniPoly]) -> Vec<UniPoly> {
        apply(&self.ideal_coords, f)
    }

    /// A form lifting the `b`-th basis element of `R_k`.
    pub fn lift(&self, b: usize) -> Vec<UniPoly> {
        column(&self.lifts, b)
    }

    /// The `a`-th basis element of `I_k`.
    pub fn ideal_generator(&self, a: usize) -> Vec<UniPoly> {
        column(&self.ideal_basis, a)
    }

    /// The projection `k[s]^N -> R_k` as a matrix.
    pub fn projection(&self) -> &PolyMatrix {
        &self.projection
    }
}

/// Free basis of `R_k` and `I_k` over the chart ring.
pub fn build_rk_chart(m: &PfaffianModel, k: u32, chart: Chart) -> Result<ChartModule, HorikawaError> {
    if !(1..=3).contains(&k) {
        return Err(HorikawaError::DegreeOutOfRange(k));
    }
    let mode = m.mode().ok_or(HorikawaError::EmptyModel)?;
    let monomials = x_monomials(k);
    let index = x_monomial_index(k);
    let n = monomials.len();
    let mut cols: Vec<Vec<UniPoly>> = Vec::new();
    for (i, p) in m.pfaffians().all().iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let e = p.is_x_homogeneous().ok_or(HorikawaError::NotHomogeneous(i))?;
        if e > k {
            continue;
        }
        let coeffs = p.chart_coefficients(chart);
        for beta in x_monomials(k - e) {
            let mut col = vec![UniPoly::zero(); n];
            for (mono, c) in &coeffs {
                let ex: [u32; 5] = core::array::from_fn(|l| mono.x_exponents()[l] + beta[l]);
                col[index[&ex]] = c.clone();
            }
            cols.push(col);
        }
    }
    let (ideal_rank, frame) = if cols.is_empty() {
        let id = PolyMatrix::identity(mode, n);
        (0, [PolyMatrix::zeros(mode, 0, n), PolyMatrix::zeros(mode, n, 0), id.clone(), id])
    } else {
        let g = from_columns(mode, n, &cols);
        let factors = g.invariant_factors();
        let r = factors.iter().filter(|f| !f.is_zero()).count();
        let bad: Vec<String> = factors
            .iter()
            .take(r)
            .filter(|f| !f.is_unit())
            .map(|f| alloc::format!("{}", f))
            .collect();
        if !bad.is_empty() {
            return Err(HorikawaError::NotFlat {
                k,
                chart: chart.name(),
                factors: bad,
            });
        }
        (r, low_degree_frame(&g, r).unwrap_or_else(|| smith_frame(&g, r)))
    };
    let rank = n - ideal_rank;
    if rank != expected_rank(k) {
        return Err(HorikawaError::RankMismatch {
            k,
            chart: chart.name(),
            expected: expected_rank(k),
            found: rank,
        });
    }
    let [ideal_coords, ideal_basis, projection, lifts] = frame;
    Ok(ChartModule {
        chart,
        degree: k,
        monomials,
        ideal_rank,
        rank,
        ideal_coords,
        ideal_basis,
        projection,
        lifts,
    })
}

const FRAME_DEGREE_LIMIT: usize = 64;

/// `[C, B, P, L]` with `[C; P]` inverse to `[B | L]` and `B` spanning the
/// column space of `g`, all of small degree.
fn low_degree_frame(g: &PolyMatrix, r: usize) -> Option<[PolyMatrix; 4]> {
    let (mode, n) = (g.mode(), g.rows());
    let p = minimal_kernel(&g.transpose(), n - r, FRAME_DEGREE_LIMIT)?.transpose();
    let b = minimal_kernel(&p, r, FRAME_DEGREE_LIMIT)?;
    let l = solve(&p, &PolyMatrix::identity(mode, n - r), FRAME_DEGREE_LIMIT)?;
    let mut bl = PolyMatrix::zeros(mode, n, n);
    for i in 0..n {
        for j in 0..r {
            bl[(i, j)] = b[(i, j)].clone();
        }
        for j in r..n {
            bl[(i, j)] = l[(i, j - r)].clone();
        }
    }
    let target = PolyMatrix::identity(mode, n).col_block(0, r);
    let c = solve(&bl.transpose(), &target, FRAME_DEGREE_LIMIT)?.transpose();
    Some([c, b, p, l])
}

/// The same frame read off a Smith form; degrees can be large.
fn smith_frame(g: &PolyMatrix, r: usize) -> [PolyMatrix; 4] {
    let n = g.rows();
    let smith = g.smith();
    let (u, u_inv) = (smith.u.unwrap(), smith.u_inv.unwrap());
    [
        u.row_block(0, r),
        u_inv.col_block(0, r),
        u.row_block(r, n),
        u_inv.col_block(r, n),
    ]
}

/// All chart data needed for one chart.
#[derive(Debug, Clone)]
pub struct ChartComputation {
    pub chart: Chart,
    pub r: [ChartModule; 3],
    /// `(rank K_2, rank K_3)`.
    pub kernel_ranks: (usize, usize),
    /// The 15x15 matrix of `mu` in the bases of `K_2 (x) R_1` and `K_3`.
    pub mu: PolyMatrix,
    pub horikawa: TorsionModule,
    pub k03: TorsionModule,
    pub k12: TorsionModule,
}

/// `K_2` and `K_3` bases: the ideal parts of degrees 2 and 3, since `R_1`
/// is all of the linear forms.
pub fn build_k2_k3(r: &[ChartModule; 3]) -> (usize, usize) {
    (r[1].ideal_rank, r[2].ideal_rank)
}

fn mu_matrix(r: &[ChartModule; 3]) -> PolyMatrix {
    let mode = r[0].mode();
    let mut cols = Vec::new();
    for a in 0..r[1].ideal_rank {
        let kappa = r[1].ideal_generator(a);
        for j in 0..5 {
            let prod = mul_forms(&linear_form(mode, j), 1, &kappa, 2);
            cols.push(r[2].ideal_coordinates(&prod));
        }
    }
    from_columns(mode, r[2].ideal_rank, &cols)
}

/// `d_{1,2}: R_1 (x) R_2 -> R_3` and `d_{2,1}: L^2 R_1 (x) R_1 -> R_1 (x) R_2`.
fn koszul_maps(r: &[ChartModule; 3]) -> (PolyMatrix, PolyMatrix) {
    let mode = r[0].mode();
    let (n1, n2) = (r[0].rank, r[1].rank);
    let l1: Vec<Vec<UniPoly>> = (0..n1).map(|i| r[0].lift(i)).collect();
    let l2: Vec<Vec<UniPoly>> = (0..n2).map(|b| r[1].lift(b)).collect();
    let mut d12 = Vec::with_capacity(n1 * n2);
    for v in &l1 {
        for w in &l2 {
            d12.push(r[2].project(&mul_forms(v, 1, w, 2)));
        }
    }
    let prod2 = |i: usize, j: usize| r[1].project(&mul_forms(&l1[i], 1, &l1[j], 1));
    let mut d21 = Vec::new();
    for i in 0..n1 {
        for j in i + 1..n1 {
            for k in 0..n1 {
                let mut col = vec![UniPoly::zero(); n1 * n2];
                for (b, c) in prod2(j, k).into_iter().enumerate() {
                    col[i * n2 + b] = &col[i * n2 + b] + &c;
                }
                for (b, c) in prod2(i, k).into_iter().enumerate() {
                    col[j * n2 + b] = &col[j * n2 + b] - &c;
                }
                d21.push(col);
            }
        }
    }
    (
        from_columns(mode, r[2].rank, &d12),
        from_columns(mode, n1 * n2, &d21),
    )
}

fn torsion(
    m: &PolyMatrix,
    what: &'static str,
    chart: Chart,
) -> Result<TorsionModule, HorikawaError> {
    m.cokernel_torsion().map_err(|e| match e {
        crate::linalg::TorsionError::Nontorsion { free_rank, .. } => HorikawaError::Nontorsion {
            what,
            chart: chart.name(),
            free_rank,
        },
    })
}

pub fn chart_computation(m: &PfaffianModel, chart: Chart) -> Result<ChartComputation, HorikawaError> {
    let r = [
        build_rk_chart(m, 1, chart)?,
        build_rk_chart(m, 2, chart)?,
        build_rk_chart(m, 3, chart)?,
    ];
    let kernel_ranks = build_k2_k3(&r);
    let mu = mu_matrix(&r);
    let horikawa = torsion(&mu, "coker(mu)", chart)?;
    let (d12, d21) = koszul_maps(&r);
    let smith = d12.smith();
    let rank12 = smith.rank();
    let k03 = torsion(&d12, "K_{0,3}", chart)?;
    let v_inv = smith.v_inv.unwrap();
    let w = v_inv.mul(&d21);
    if !w.row_block(0, rank12).is_zero() {
        return Err(HorikawaError::NotAComplex(chart.name()));
    }
    let y = w.row_block(rank12, w.rows());
    let k12 = torsion(&y, "K_{1,2}", chart)?;
    Ok(ChartComputation {
        chart,
        r,
        kernel_ranks,
        mu,
        horikawa,
        k03,
        k12,
    })
}

/// Stalk of a torsion sheaf on the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportEntry {
    pub place: BasePlace,
    pub length: usize,
    /// Multiplicities of the place in the invariant factors.
    pub exponents: Vec<usize>,
}

impl SupportEntry {
    /// Half the length, when it is even.
    pub fn horikawa_number(&self) -> Option<usize> {
        self.length.is_multiple_of(2).then_some(self.length / 2)
    }
}

/// A torsion sheaf on the base assembled from its two charts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionSheaf {
    pub support: Vec<SupportEntry>,
    pub total_length: usize,
}

impl TorsionSheaf {
    pub fn length_at(&self, p: &BasePoint) -> usize {
        self.support
            .iter()
            .find(|e| e.place.point() == Some(p))
            .map_or(0, |e| e.length)
    }

    pub fn is_zero(&self) -> bool {
        self.total_length == 0
    }

    /// `(place, length)` pairs; used to compare sheaves.
    pub fn lengths(&self) -> Vec<(BasePlace, usize)> {
        self.support.iter().map(|e| (e.place.clone(), e.length)).collect()
    }

    /// Places with their sorted exponents: the local isomorphism types.
    pub fn local_types(&self) -> Vec<(BasePlace, Vec<usize>)> {
        self.support
            .iter()
            .map(|e| {
                let mut x = e.exponents.clone();
                x.sort_unstable();
                (e.place.clone(), x)
            })
            .collect()
    }
}

fn chart_entries(t: &TorsionModule, chart: Chart) -> BTreeMap<BasePlace, SupportEntry> {
    t.points
        .iter()
        .map(|p| {
            let place = BasePlace::from_chart(chart, &p.place);
            let entry = SupportEntry {
                place: place.clone(),
                length: p.length,
                exponents: p.exponents.clone(),
            };
            (place, entry)
        })
        .collect()
}

/// Glue the two charts: the first chart supplies every place it contains,
/// the second only the point it alone contains. Both orders are computed
/// and must agree on the overlap.
pub fn merge_charts(
    what: &'static str,
    t0: &TorsionModule,
    t1: &TorsionModule,
) -> Result<TorsionSheaf, HorikawaError> {
    let a = chart_entries(t0, Chart::T0);
    let b = chart_entries(t1, Chart::T1);
    let overlap = |p: &BasePlace| p.in_chart(Chart::T0) && p.in_chart(Chart::T1);
    for place in a.keys().chain(b.keys()).filter(|p| overlap(p)) {
        let la = a.get(place).map_or(0, |e| e.length);
        let lb = b.get(place).map_or(0, |e| e.length);
        if la != lb {
            return Err(HorikawaError::ChartMismatch {
                what,
                place: alloc::format!("{}", place),
                first: la,
                second: lb,
            });
        }
    }
    let mut merged: BTreeMap<BasePlace, SupportEntry> = a;
    for (place, e) in b {
        merged.entry(place).or_insert(e);
    }
    let support: Vec<SupportEntry> = merged.into_values().collect();
    let total_length = support.iter().map(|e| e.length).sum();
    Ok(TorsionSheaf {
        support,
        total_length,
    })
}

/// Degree of `R_k` read off the gluing of the two charts.
///
/// Over the first chart `R_k` is generated by the classes of the frames
/// `t0^(e_a) x^a`, `e_a = k tau + a.alpha`, where `tau` is the t-part of the
/// relative canonical twist. In the second chart with coordinate `v = t0/t1`
/// these are `v^(e_a)` times the projected monomials. With `w = 1/v` and a
/// common shift `w^D` they span a `k[w]`-lattice with invariant factors
/// `w^(m_i)`, and `deg R_k = rank * D - sum m_i`.
pub fn glued_degree(
    second: &ChartModule,
    weights: &AmbientWeights,
    tau: i64,
) -> Result<i64, HorikawaError> {
    let mode = second.mode();
    let k = second.degree;
    let projected: Vec<(i64, Vec<UniPoly>)> = second
        .monomials
        .iter()
        .enumerate()
        .map(|(idx, alpha)| {
            let mut e = vec![UniPoly::zero(); second.monomials.len()];
            e[idx] = UniPoly::one(mode);
            let shift = k as i64 * tau + weights.dot(alpha);
            (shift, second.project(&e))
        })
        .collect();
    let d = projected
        .iter()
        .flat_map(|(shift, v)| v.iter().filter_map(|p| p.degree()).map(move |deg| shift + deg as i64))
        .max()
        .unwrap_or(0);
    let cols: Vec<Vec<UniPoly>> = projected
        .iter()
        .map(|(shift, v)| {
            v.iter()
                .map(|p| {
                    UniPoly::from_sparse(
                        p.coeffs()
                            .iter()
                            .enumerate()
                            .filter(|(_, c)| !c.is_zero())
                            .map(|(j, c)| ((d - shift - j as i64) as usize, c.clone()))
                            .collect(),
                    )
                })
                .collect()
        })
        .collect();
    let lattice = from_columns(mode, second.rank, &cols);
    let mut precision = 64;
    loop {
        if let Some(vals) = local_exponents(&lattice, second.rank, precision) {
            let total: i64 = vals.iter().map(|&v| v as i64).sum();
            return Ok(second.rank as i64 * d - total);
        }
        precision *= 2;
        if precision > MAX_PRECISION {
            return Err(HorikawaError::Gluing(k));
        }
    }
}

const MAX_PRECISION: usize = 1 << 13;

type Series = Vec<Scalar>;

fn series_mul(a: &[Scalar], b: &[Scalar], prec: usize, mode: FieldMode) -> Series {
    let mut out = vec![Scalar::zero(mode); prec];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate().take(prec - i) {
            if !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    out
}

fn series_inv(a: &[Scalar], prec: usize, mode: FieldMode) -> Series {
    let inv0 = a[0].inv().expect("unit series");
    let mut out = vec![Scalar::zero(mode); prec];
    out[0] = inv0.clone();
    for n in 1..prec {
        let mut acc = Scalar::zero(mode);
        for i in 1..=n.min(a.len() - 1) {
            acc = &acc + &(&a[i] * &out[n - i]);
        }
        out[n] = -&(&acc * &inv0);
    }
    out
}

fn valuation(a: &[Scalar]) -> Option<usize> {
    a.iter().position(|c| !c.is_zero())
}

/// Exponents `m_i` of the elementary divisors `w^(m_i)` of a matrix over
/// `k[[w]]`, computed modulo `w^prec`; `None` if the precision is too low
/// to see `rank` of them.
fn local_exponents(m: &PolyMatrix, rank: usize, prec: usize) -> Option<Vec<usize>> {
    let mode = m.mode();
    let mut a: Vec<Vec<Series>> = (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let mut s: Series = m[(i, j)].coeffs().iter().take(prec).cloned().collect();
                    s.resize(prec, Scalar::zero(mode));
                    s
                })
                .collect()
        })
        .collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut out = Vec::with_capacity(rank);
    for t in 0..rank {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if let Some(v) = valuation(&a[i][j]) {
                    if best.is_none_or(|b| v < b.2) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let (pi, pj, v) = best?;
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let unit: Series = a[t][t][v..].to_vec();
        let inv = series_inv(&unit, prec, mode);
        let pivot_row: Vec<Series> = a[t].iter().map(|e| series_mul(e, &inv, prec, mode)).collect();
        for i in t + 1..rows {
            let Some(vi) = valuation(&a[i][t]) else { continue };
            debug_assert!(vi >= v);
            let factor: Series = a[i][t][v..].to_vec();
            for j in t..cols {
                let sub = series_mul(&factor, &pivot_row[j], prec, mode);
                for (x, y) in a[i][j].iter_mut().zip(sub) {
                    *x = &*x - &y;
                }
            }
        }
        out.push(v);
    }
    Some(out)
}

/// `deg R_k` from the gluing versus `chi_f + C(k,2) K^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeCheck {
    pub k: u32,
    pub glued: i64,
    pub expected: i64,
}

impl DegreeCheck {
    pub fn holds(&self) -> bool {
        self.glued == self.expected
    }
}

#[derive(Debug, Clone)]
pub struct HorikawaReport {
    pub ranks: [usize; 3],
    pub kernel_ranks: (usize, usize),
    pub horikawa: TorsionSheaf,
    pub k03: TorsionSheaf,
    pub k12: TorsionSheaf,
    /// Every local length of `F` is even.
    pub even: bool,
    /// `K_{1,2}` and `F` have the same support and, at each place, the same
    /// multiset of invariant-factor exponents.
    pub koszul_matches: bool,
    pub degrees: Vec<DegreeCheck>,
    pub charts: [ChartComputation; 2],
}

impl HorikawaReport {
    /// Sum of the local Horikawa numbers, `None` if some length is odd.
    pub fn horikawa_sum(&self) -> Option<usize> {
        self.horikawa
            .support
            .iter()
            .map(|e| e.horikawa_number())
            .sum()
    }

    /// `sum (length K_{1,2} - length K_{0,3}) / 2`, `None` if odd.
    pub fn koszul_sum(&self) -> Option<i64> {
        let twice = self.k12.total_length as i64 - self.k03.total_length as i64;
        (twice % 2 == 0).then_some(twice / 2)
    }
}

/// Everything on both charts. Degree checks run only when the invariants
/// and the relative twist are supplied.
pub fn horikawa(
    m: &PfaffianModel,
    global: Option<(&FibrationInvariants, i64)>,
) -> Result<HorikawaReport, HorikawaError> {
    let c0 = chart_computation(m, Chart::T0)?;
    let c1 = chart_computation(m, Chart::T1)?;
    let f = merge_charts("coker(mu)", &c0.horikawa, &c1.horikawa)?;
    let k03 = merge_charts("K_{0,3}", &c0.k03, &c1.k03)?;
    let k12 = merge_charts("K_{1,2}", &c0.k12, &c1.k12)?;
    let even = f.support.iter().all(|e| e.length % 2 == 0);
    let koszul_matches = k12.local_types() == f.local_types();
    let mut degrees = Vec::new();
    for (i, k) in (1u32..=3).enumerate() {
        let Some((inv, tau)) = global else { break };
        let glued = glued_degree(&c1.r[i], &m.weights, tau)?;
        let kk = k as i64;
        degrees.push(DegreeCheck {
            k,
            glued,
            expected: inv.chi_f + kk * (kk - 1) / 2 * inv.k2,
        });
    }
    Ok(HorikawaReport {
        ranks: [c0.r[0].rank, c0.r[1].rank, c0.r[2].rank],
        kernel_ranks: c0.kernel_ranks,
        horikawa: f,
        k03,
        k12,
        even,
        koszul_matches,
        degrees,
        charts: [c0, c1],
    })
}

/// One integer identity with its two sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub lhs: i64,
    pub rhs: i64,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

impl fmt::Display for IdentityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} {} {}",
            self.name,
            self.lhs,
            if self.holds() { "=" } else { "!=" },
            self.rhs
        )
    }
}

#[derive(Debug, Clone)]
pub struct SlopeReport {
    pub invariants: Result<FibrationInvariants, CohomologyError>,
    pub horikawa: Result<HorikawaReport, HorikawaError>,
    /// Empty unless both of the above succeeded.
    pub identities: Vec<IdentityCheck>,
}

impl SlopeReport {
    pub fn passed(&self) -> bool {
        let Ok(h) = &self.horikawa else { return false };
        self.invariants.is_ok()
            && !self.identities.is_empty()
            && self.identities.iter().all(|c| c.holds())
            && h.even
            && h.k03.is_zero()
            && h.koszul_matches
            && h.degrees.len() == 3
            && h.degrees.iter().all(|d| d.holds())
    }
}

/// `K^2 = 4 chi_f + sum H` and `K^2 = 4 chi_f + sum (l(K_{1,2}) - l(K_{0,3}))/2`.
pub fn verify_slope(m: &PfaffianModel) -> SlopeReport {
    let complex = FreeComplex::from_model(m);
    let invariants = complex.as_ref().map_err(Clone::clone).and_then(|c| c.invariants());
    let global = match (&complex, &invariants) {
        (Ok(c), Ok(inv)) => Some((inv, c.relative_twist().t)),
        _ => None,
    };
    let horikawa = horikawa(m, global);
    let mut identities = Vec::new();
    if let (Ok(inv), Ok(h)) = (&invariants, &horikawa) {
        let slope = 4 * inv.chi_f;
        if let Some(sum) = h.horikawa_sum() {
            identities.push(IdentityCheck {
                name: "K^2 = 4 chi_f + sum H",
                lhs: inv.k2,
                rhs: slope + sum as i64,
            });
        }
        if let Some(sum) = h.koszul_sum() {
            identities.push(IdentityCheck {
                name: "K^2 = 4 chi_f + sum (l(K12) - l(K03))/2",
                lhs: inv.k2,
                rhs: slope + sum,
            });
        }
    }
    SlopeReport {
        invariants,
        horikawa,
        identities,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pfaffian::{family_a, random_quadrics};
    use crate::poly::Polynomial;

    fn model(n: u32) -> PfaffianModel {
        let p = FieldMode::default_prime();
        family_a(n, random_quadrics(0, p)).unwrap()
    }

    #[test]
    fn ranks_of_graded_pieces() {
        let m = model(1);
        for chart in [Chart::T0, Chart::T1] {
            let r: Vec<usize> = (1..=3).map(|k| build_rk_chart(&m, k, chart).unwrap().rank).collect();
            assert_eq!(r, [5, 12, 20]);
        }
    }

    #[test]
    fn family_a_one() {
        let report = verify_slope(&model(1));
        let h = report.horikawa.as_ref().unwrap();
        let origin = BasePoint::affine(Scalar::zero(FieldMode::default_prime()));
        assert_eq!(h.horikawa.total_length, 2);
        assert_eq!(h.horikawa.length_at(&origin), 2);
        assert_eq!(h.kernel_ranks, (3, 15));
        assert!(h.k03.is_zero());
        assert!(h.koszul_matches);
        let degs: Vec<i64> = h.degrees.iter().map(|d| d.glued).collect();
        assert_eq!(degs, [10, 51, 133]);
        assert!(report.passed(), "{:?}", report.identities);
    }

    #[test]
    fn constant_trigonal_family_is_not_torsion() {
        let p = FieldMode::default_prime();
        let x = |i| Polynomial::x(i, p);
        let [q1, q2, q3] = random_quadrics(0, p);
        let upper = [Polynomial::zero(), x(0), x(2), x(3), x(1), x(3), x(4), q1, q2, q3];
        let m = PfaffianModel::new("constant", crate::poly::AmbientWeights::zero(), upper).unwrap();
        let report = verify_slope(&m);
        assert!(matches!(report.horikawa, Err(HorikawaError::Nontorsion { .. })), "{:?}", report.horikawa.err());
        assert!(report.identities.is_empty());
        assert!(!report.passed());
    }
}
