//! Fibre-by-fibre analysis of the canonical ideal: dimensions of its graded
//! pieces, the multiplication map `I_2 (x) S_1 -> I_3`, and a randomized
//! smoothness probe of the surface along a fibre.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::base::BasePoint;
use crate::linalg::FieldMatrix;
use crate::pfaffian::PfaffianModel;
use crate::poly::{
    jacobian, x_monomial_index, x_monomials, Chart, Monomial, Polynomial, AMBIENT_VARS, X0,
};
use crate::scalar::{FieldMode, Scalar};
use crate::unipoly::UniPoly;

/// Largest x-degree for which graded pieces are computed.
pub const MAX_GRADED_DEGREE: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiberError {
    #[error("all Pfaffians vanish identically on the fibre over {0}")]
    Degenerate(BasePoint),
    #[error("the model has no entries")]
    EmptyModel,
    #[error("generator {0} is not homogeneous in x")]
    NotHomogeneous(usize),
    #[error("generator {0} involves symbolic coefficients")]
    Symbolic(usize),
    #[error("graded pieces are only computed up to degree {MAX_GRADED_DEGREE}, asked for {0}")]
    DegreeTooLarge(u32),
    #[error("the smoothness probe needs a prime field")]
    NotPrimeField,
    #[error("point and model use different fields")]
    FieldMismatch,
}

/// The five Pfaffians restricted to one fibre, as forms in `x0..x4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberIdeal {
    pub point: BasePoint,
    /// Nonzero generators, each made monic.
    pub gens: Vec<Polynomial>,
}

pub fn specialize(m: &PfaffianModel, point: &BasePoint) -> Result<FiberIdeal, FiberError> {
    let mode = m.mode().ok_or(FiberError::EmptyModel)?;
    if mode != point.mode() {
        return Err(FiberError::FieldMismatch);
    }
    let gens: Vec<Polynomial> = m
        .pfaffians()
        .all()
        .iter()
        .map(|p| p.substitute_t(point.t0(), point.t1()))
        .filter(|p| !p.is_zero())
        .map(|p| p.monic())
        .collect();
    if gens.is_empty() {
        return Err(FiberError::Degenerate(point.clone()));
    }
    for (i, g) in gens.iter().enumerate() {
        if g.max_var() > AMBIENT_VARS {
            return Err(FiberError::Symbolic(i));
        }
        if g.is_x_homogeneous().is_none() {
            return Err(FiberError::NotHomogeneous(i));
        }
    }
    Ok(FiberIdeal {
        point: point.clone(),
        gens,
    })
}

impl FiberIdeal {
    pub fn mode(&self) -> FieldMode {
        self.point.mode()
    }

    /// x-degrees of the generators, in generator order.
    pub fn degrees(&self) -> Vec<u32> {
        self.gens.iter().map(|g| g.is_x_homogeneous().unwrap()).collect()
    }

    /// `dim I_d`, the degree `d` piece of the ideal.
    pub fn graded_ideal_dim(&self, d: u32) -> Result<usize, FiberError> {
        if d > MAX_GRADED_DEGREE {
            return Err(FiberError::DegreeTooLarge(d));
        }
        Ok(self.multiples_matrix(d, d).rank())
    }

    /// `dim I_3 - dim(I_2 * S_1)`, or `None` unless `dim I_2 = 3`.
    pub fn coker_mu_dim(&self) -> Option<usize> {
        if self.multiples_matrix(2, 2).rank() != 3 {
            return None;
        }
        let full = self.multiples_matrix(3, 3).rank();
        let from_quadrics = self.multiples_matrix(3, 2).rank();
        Some(full - from_quadrics)
    }

    /// Columns `x^alpha g` of degree `d` for every generator of degree
    /// at most `max_gen`, as coordinates in the degree `d` monomials.
    fn multiples_matrix(&self, d: u32, max_gen: u32) -> FieldMatrix {
        let index = x_monomial_index(d);
        let mut cols: Vec<Vec<Scalar>> = Vec::new();
        for (g, e) in self.gens.iter().zip(self.degrees()) {
            if e > d || e > max_gen {
                continue;
            }
            for alpha in x_monomials(d - e) {
                let mult = g.mul_monomial(&Monomial::ambient([0, 0], alpha));
                let mut col = vec![Scalar::zero(self.mode()); index.len()];
                for (mono, c) in mult.terms() {
                    col[index[&mono.x_exponents()]] = c.clone();
                }
                cols.push(col);
            }
        }
        FieldMatrix::from_columns(self.mode(), index.len(), &cols)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Nontrigonal,
    Trigonal,
    Anomalous,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Nontrigonal => "nontrigonal",
            Verdict::Trigonal => "trigonal",
            Verdict::Anomalous => "anomalous",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberClassification {
    pub point: BasePoint,
    pub quadric_dim: usize,
    pub cubic_dim: usize,
    pub coker_mu_dim: Option<usize>,
    pub verdict: Verdict,
}

impl FiberClassification {
    pub fn from_counts(point: BasePoint, quadric_dim: usize, cubic_dim: usize, coker: Option<usize>) -> Self {
        let verdict = match (quadric_dim, cubic_dim, coker) {
            (3, 15, Some(0)) => Verdict::Nontrigonal,
            (3, 15, Some(2)) => Verdict::Trigonal,
            _ => Verdict::Anomalous,
        };
        FiberClassification {
            point,
            quadric_dim,
            cubic_dim,
            coker_mu_dim: coker,
            verdict,
        }
    }
}

pub fn classify(m: &PfaffianModel, point: &BasePoint) -> Result<FiberClassification, FiberError> {
    let f = specialize(m, point)?;
    Ok(FiberClassification::from_counts(
        point.clone(),
        f.graded_ideal_dim(2)?,
        f.graded_ideal_dim(3)?,
        f.coker_mu_dim(),
    ))
}

/// Classify each distinct point; the result is sorted by point.
pub fn scan<'a>(
    m: &PfaffianModel,
    points: impl IntoIterator<Item = &'a BasePoint>,
) -> Result<Vec<FiberClassification>, FiberError> {
    let distinct: BTreeSet<&BasePoint> = points.into_iter().collect();
    distinct.into_iter().map(|p| classify(m, p)).collect()
}

/// Seeded points `(1:c)` with `c` uniform in the field (small integers in
/// rational mode), avoiding `exclude`.
pub fn random_points(mode: FieldMode, count: usize, seed: u64, exclude: &[BasePoint]) -> Vec<BasePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: BTreeSet<BasePoint> = exclude.iter().cloned().collect();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count && attempts < 100 * (count + 1) {
        attempts += 1;
        let c = match mode {
            FieldMode::Rational => {
                use rand::Rng;
                Scalar::from_i64(mode, rng.gen_range(-1000..=1000))
            }
            FieldMode::Prime(_) => Scalar::random(mode, &mut rng),
        };
        let p = BasePoint::affine(c);
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    out
}

/// A point of the surface where the Jacobian drops rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularWitness {
    /// Values of `t0, t1, x0..x4`.
    pub coordinates: Vec<Scalar>,
    pub jacobian_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProbeOutcome {
    /// Every sampled fibre point is a smooth point of the surface.
    Pass { points_checked: usize },
    Fail { witness: SingularWitness },
    /// No point of the fibre was found within the trial budget.
    Inconclusive { trials: usize },
}

impl ProbeOutcome {
    pub fn name(&self) -> &'static str {
        match self {
            ProbeOutcome::Pass { .. } => "pass",
            ProbeOutcome::Fail { .. } => "fail",
            ProbeOutcome::Inconclusive { .. } => "inconclusive",
        }
    }
}

/// Sample points of the fibre and check that the Jacobian of the five
/// Pfaffians in the chart coordinate and `x0..x4` has rank 3 there.
///
/// Each trial cuts the fibre by a random hyperplane, works in the affine
/// chart `x3 = 1`, and solves three random combinations of the generators
/// by iterated resultants.
pub fn smoothness_probe(
    m: &PfaffianModel,
    point: &BasePoint,
    trials: usize,
    seed: u64,
) -> Result<ProbeOutcome, FiberError> {
    let mode = point.mode();
    if !mode.is_prime_field() {
        return Err(FiberError::NotPrimeField);
    }
    let fiber = specialize(m, point)?;
    let pf = m.pfaffians().all();
    let chart = if point.t0().is_zero() { Chart::T1 } else { Chart::T0 };
    let vars: Vec<usize> = core::iter::once(chart.local_var()).chain(X0..X0 + 5).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0usize;
    for _ in 0..trials {
        for x in sample_fiber_points(&fiber, &mut rng) {
            let mut coords = vec![point.t0().clone(), point.t1().clone()];
            coords.extend(x);
            let rank = jacobian(&pf, &vars, &coords).rank();
            if rank < 3 {
                return Ok(ProbeOutcome::Fail {
                    witness: SingularWitness {
                        coordinates: coords,
                        jacobian_rank: rank,
                    },
                });
            }
            checked += 1;
        }
    }
    Ok(if checked == 0 {
        ProbeOutcome::Inconclusive { trials }
    } else {
        ProbeOutcome::Pass {
            points_checked: checked,
        }
    })
}

fn random_combination(gens: &[Polynomial], mode: FieldMode, rng: &mut ChaCha8Rng) -> Polynomial {
    gens.iter().fold(Polynomial::zero(), |acc, g| {
        &acc + &g.scale(&Scalar::random_nonzero(mode, rng))
    })
}

/// Points `(x0..x4)` of the fibre on one random hyperplane.
///
/// In a random frame `x = A y` the hyperplane is `y4 = 0` and the chart is
/// `y3 = 1`; the remaining `y0, y1, y2` are eliminated by resultants.
fn sample_fiber_points(f: &FiberIdeal, rng: &mut ChaCha8Rng) -> Vec<Vec<Scalar>> {
    let mode = f.mode();
    let quadrics: Vec<Polynomial> = f
        .gens
        .iter()
        .filter(|g| g.is_x_homogeneous() == Some(2))
        .cloned()
        .collect();
    let pool = if quadrics.len() >= 2 { &quadrics } else { &f.gens };
    let frame = loop {
        let rows: Vec<Vec<Scalar>> = (0..5)
            .map(|_| (0..5).map(|_| Scalar::random(mode, rng)).collect())
            .collect();
        let a = FieldMatrix::from_rows(mode, rows);
        if !a.determinant().is_zero() {
            break a;
        }
    };
    let y = |j: usize| match j {
        0..=2 => Polynomial::x(j, mode),
        3 => Polynomial::one(mode),
        _ => Polynomial::zero(),
    };
    let mut images = vec![Polynomial::zero(), Polynomial::zero()];
    for i in 0..5 {
        images.push((0..5).fold(Polynomial::zero(), |acc, j| &acc + &y(j).scale(&frame[(i, j)])));
    }
    let eqs: Vec<Polynomial> = [
        random_combination(pool, mode, rng),
        random_combination(pool, mode, rng),
        random_combination(&f.gens, mode, rng),
    ]
    .iter()
    .map(|g| g.compose(&images))
    .collect();
    let tot: Vec<usize> = eqs.iter().map(total_degree).collect();
    let dx2: Vec<usize> = eqs.iter().map(|g| var_degree(g, X0 + 2)).collect();
    if tot.contains(&0) {
        return Vec::new();
    }
    let d12 = tot[0] * tot[1];
    let d13 = tot[0] * tot[2];
    let nodes = |n: usize| -> Vec<Scalar> { (0..n).map(|i| Scalar::from_i64(mode, i as i64 + 1)).collect() };

    // resultant in y2 as a polynomial in y1, for fixed y0 = a
    let res_y1 = |a: &Scalar, j: usize, bound: usize| -> UniPoly {
        let bs = nodes(bound + 1);
        let vals: Vec<Scalar> = bs
            .iter()
            .map(|b| {
                let f0 = in_x2(&eqs[0], a, b);
                let fj = in_x2(&eqs[j], a, b);
                f0.resultant_formal(&fj, dx2[0], dx2[j], mode)
            })
            .collect();
        UniPoly::interpolate(&bs, &vals)
    };
    let final_nodes = nodes(d12 * d13 + 1);
    let pairs: Vec<(UniPoly, UniPoly)> = final_nodes
        .iter()
        .map(|a| (res_y1(a, 1, d12), res_y1(a, 2, d13)))
        .collect();
    let e12 = pairs.iter().filter_map(|p| p.0.degree()).max().unwrap_or(0);
    let e13 = pairs.iter().filter_map(|p| p.1.degree()).max().unwrap_or(0);
    let final_vals: Vec<Scalar> = pairs
        .iter()
        .map(|(r12, r13)| r12.resultant_formal(r13, e12, e13, mode))
        .collect();
    let fin = UniPoly::interpolate(&final_nodes, &final_vals);
    if fin.is_zero() {
        return Vec::new();
    }
    let mut out: BTreeSet<Vec<Scalar>> = BTreeSet::new();
    for a in fin.roots().unwrap_or_default() {
        let g = res_y1(&a, 1, d12).gcd(&res_y1(&a, 2, d13));
        if g.is_zero() {
            continue;
        }
        for b in g.roots().unwrap_or_default() {
            let polys: Vec<UniPoly> = eqs.iter().map(|e| in_x2(e, &a, &b)).collect();
            let g = polys[0].gcd(&polys[1]).gcd(&polys[2]);
            if g.is_zero() {
                continue;
            }
            for c in g.roots().unwrap_or_default() {
                let yv = [a.clone(), b.clone(), c, Scalar::one(mode), Scalar::zero(mode)];
                let pt = frame.mul_vec(&yv);
                let mut full = vec![Scalar::zero(mode); 2];
                full.extend(pt.iter().cloned());
                if f.gens.iter().all(|g| g.eval(&full).is_none_or(|v| v.is_zero())) {
                    out.insert(pt);
                }
            }
        }
    }
    out.into_iter().collect()
}

fn total_degree(p: &Polynomial) -> usize {
    p.terms()
        .iter()
        .map(|(m, _)| m.exponents().iter().map(|&e| e as usize).sum::<usize>())
        .max()
        .unwrap_or(0)
}

fn var_degree(p: &Polynomial, v: usize) -> usize {
    p.terms().iter().map(|(m, _)| m.exp(v) as usize).max().unwrap_or(0)
}

/// `p(a, b, s)` for a polynomial in the first three x-variables.
fn in_x2(p: &Polynomial, a: &Scalar, b: &Scalar) -> UniPoly {
    UniPoly::from_sparse(
        p.terms()
            .iter()
            .map(|(m, c)| {
                let v = &(c * &a.pow(m.exp(X0))) * &b.pow(m.exp(X0 + 1));
                (m.exp(X0 + 2) as usize, v)
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pfaffian::{family_a, random_quadrics};
    use crate::poly::parse;

    fn model(n: u32, mode: FieldMode) -> PfaffianModel {
        family_a(n, random_quadrics(0, mode)).unwrap()
    }

    #[test]
    fn trigonal_fibre_of_family_a() {
        let q = FieldMode::Rational;
        let m = model(1, q);
        let origin = BasePoint::affine(Scalar::zero(q));
        let c = classify(&m, &origin).unwrap();
        assert_eq!((c.quadric_dim, c.cubic_dim, c.coker_mu_dim), (3, 15, Some(2)));
        assert_eq!(c.verdict, Verdict::Trigonal);
        let generic = classify(&m, &BasePoint::affine(Scalar::from_i64(q, 1))).unwrap();
        assert_eq!(generic.verdict, Verdict::Nontrigonal);
        let inf = classify(&m, &BasePoint::infinity(q)).unwrap();
        assert_eq!(inf.verdict, Verdict::Nontrigonal);
    }

    #[test]
    fn fibre_at_infinity_contains_the_quadrics() {
        let q = FieldMode::Rational;
        let qs = random_quadrics(0, q);
        let m = family_a(1, qs.clone()).unwrap();
        let f = specialize(&m, &BasePoint::infinity(q)).unwrap();
        for qi in &qs {
            assert!(f.gens.contains(&qi.monic()));
        }
    }

    #[test]
    fn generic_degrees() {
        let q = FieldMode::Rational;
        let f = specialize(&model(2, q), &BasePoint::affine(Scalar::one(q))).unwrap();
        let mut d = f.degrees();
        d.sort_unstable();
        assert_eq!(d, [2, 2, 2, 3, 3]);
        assert_eq!(f.graded_ideal_dim(1).unwrap(), 0);
        // Hilbert function 8d - 4 of a canonical genus 5 curve
        assert_eq!(f.graded_ideal_dim(4).unwrap(), 70 - 28);
        assert!(f.graded_ideal_dim(5).is_err());
    }

    #[test]
    fn artificial_ideal_is_anomalous() {
        let q = FieldMode::Rational;
        let gens = ["x0^2", "x0*x1", "x1^2", "x2^2", "x0*x2"].map(|s| parse(s, q).unwrap());
        let f = FiberIdeal {
            point: BasePoint::affine(Scalar::zero(q)),
            gens: gens.to_vec(),
        };
        assert_eq!(f.coker_mu_dim(), None);
        let c = FiberClassification::from_counts(
            f.point.clone(),
            f.graded_ideal_dim(2).unwrap(),
            f.graded_ideal_dim(3).unwrap(),
            None,
        );
        assert_eq!(c.verdict, Verdict::Anomalous);
    }

    #[test]
    fn probe_passes_on_generic_fibre() {
        let p = FieldMode::default_prime();
        let m = model(1, p);
        let out = smoothness_probe(&m, &BasePoint::affine(Scalar::one(p)), 20, 7).unwrap();
        assert!(matches!(out, ProbeOutcome::Pass { .. }), "{:?}", out);
    }

    #[test]
    fn probe_budget_zero_is_inconclusive() {
        let p = FieldMode::default_prime();
        let out = smoothness_probe(&model(1, p), &BasePoint::affine(Scalar::one(p)), 0, 0).unwrap();
        assert_eq!(out, ProbeOutcome::Inconclusive { trials: 0 });
    }

    #[test]
    fn probe_rejects_rational_mode() {
        let q = FieldMode::Rational;
        let err = smoothness_probe(&model(1, q), &BasePoint::affine(Scalar::one(q)), 1, 0);
        assert_eq!(err, Err(FiberError::NotPrimeField));
    }
}
