//! Line-bundle cohomology on split scrolls over `P^1` and the invariants of a
//! Pfaffian surface read off its Buchsbaum-Eisenbud resolution.
//!
//! For weights `a` and `O(d, b)` with `deg xi = (-ai, 1)`:
//! * `b >= 0`: `H^j = sum_{|alpha| = b} H^j(P^1, O(d + a.alpha))`, `j = 0, 1`;
//! * `-4 <= b <= -1`: everything vanishes;
//! * `b <= -5`: `H^j = sum_{|alpha| = -b-5} H^{j-4}(P^1, O(d - a.alpha - sum a))`.
//!
//! The canonical bundle of the scroll is `O(sum a - 2, -5)`.

use alloc::vec::Vec;

use rand::Rng;
use thiserror::Error;

use crate::linalg::FieldMatrix;
use crate::pfaffian::PfaffianModel;
use crate::poly::{x_monomials, AmbientWeights, Bidegree, AMBIENT_VARS};
use crate::scalar::{FieldMode, Scalar};

/// Genus of the fibres.
pub const FIBRE_GENUS: i64 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("Pfaffian bidegrees are not all defined")]
    Inhomogeneous,
    #[error("sum of Pfaffian bidegrees {0} is not divisible by 2")]
    OddDegreeSum(Bidegree),
    #[error("cohomology index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("spectral sequence for O_S{0} does not degenerate at E1")]
    Undetermined(Bidegree),
    #[error("k must be at least 2, got {0}")]
    KTooSmall(i64),
    #[error("K^2 inconsistent across k: {0:?}")]
    InconsistentK2(Vec<(i64, i64)>),
    #[error("chi_f from chi(O_S) is {from_structure_sheaf} but chi(R_k) gives {from_rk}")]
    InconsistentChi { from_structure_sheaf: i64, from_rk: i64 },
}

fn h_p1(j: usize, d: i64) -> i64 {
    match j {
        0 => (d + 1).max(0),
        1 => (-d - 1).max(0),
        _ => 0,
    }
}

/// `h^i(O(d, b))` on the scroll with weights `w`, `i` in `0..=5`.
pub fn h_i(twist: Bidegree, w: &AmbientWeights, i: usize) -> Result<i64, CohomologyError> {
    if i > 5 {
        return Err(CohomologyError::IndexOutOfRange(i));
    }
    let (d, b) = (twist.t, twist.x);
    Ok(if b >= 0 {
        if i > 1 {
            return Ok(0);
        }
        x_monomials(b as u32)
            .iter()
            .map(|alpha| h_p1(i, d + w.dot(alpha)))
            .sum()
    } else if b >= -4 {
        0
    } else {
        if i < 4 {
            return Ok(0);
        }
        x_monomials((-b - 5) as u32)
            .iter()
            .map(|alpha| h_p1(i - 4, d - w.dot(alpha) - w.sum()))
            .sum()
    })
}

pub fn chi_line(twist: Bidegree, w: &AmbientWeights) -> i64 {
    (0..=5)
        .map(|i| {
            let h = h_i(twist, w, i).unwrap();
            if i % 2 == 0 {
                h
            } else {
                -h
            }
        })
        .sum()
}

pub fn ambient_canonical(w: &AmbientWeights) -> Bidegree {
    Bidegree::new(w.sum() - 2, -5)
}

/// `L0 <- L1 <- L2 <- L3` as lists of twists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeComplex {
    pub weights: AmbientWeights,
    pub pfaffian_degrees: [Bidegree; 5],
    pub s: Bidegree,
    pub levels: [Vec<Bidegree>; 4],
}

/// Numerical invariants of the fibred surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FibrationInvariants {
    pub p_g: i64,
    pub q: i64,
    pub chi_os: i64,
    pub chi_f: i64,
    pub k2: i64,
    pub e_f: i64,
}

impl FreeComplex {
    pub fn from_pfaffian_degrees(
        f: [Bidegree; 5],
        weights: AmbientWeights,
    ) -> Result<Self, CohomologyError> {
        let sum = f.iter().fold(Bidegree::default(), |a, &b| a + b);
        if sum.t % 2 != 0 || sum.x % 2 != 0 {
            return Err(CohomologyError::OddDegreeSum(sum));
        }
        let s = Bidegree::new(sum.t / 2, sum.x / 2);
        Ok(FreeComplex {
            weights,
            pfaffian_degrees: f,
            s,
            levels: [
                alloc::vec![Bidegree::default()],
                f.iter().map(|&d| -d).collect(),
                f.iter().map(|&d| d - s).collect(),
                alloc::vec![-s],
            ],
        })
    }

    pub fn from_model(m: &PfaffianModel) -> Result<Self, CohomologyError> {
        let f = m
            .homogeneity()
            .pfaffian_bidegrees()
            .ok_or(CohomologyError::Inhomogeneous)?;
        Self::from_pfaffian_degrees(f, m.weights)
    }

    /// `chi(O_S(d))` as the alternating sum over the resolution.
    pub fn chi(&self, d: Bidegree) -> i64 {
        self.levels
            .iter()
            .enumerate()
            .map(|(i, lvl)| {
                let c: i64 = lvl.iter().map(|&l| chi_line(d + l, &self.weights)).sum();
                if i % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .sum()
    }

    /// `h^0, h^1, h^2` of `O_S(d)` from the hypercohomology spectral sequence
    /// `E1^{-i,j} = H^j(L_i(d))`, when no differential can be nonzero.
    pub fn cohomology(&self, d: Bidegree) -> Result<[i64; 3], CohomologyError> {
        let mut terms: Vec<(i64, i64, i64)> = Vec::new(); // (p, q, dim)
        for (i, lvl) in self.levels.iter().enumerate() {
            for j in 0..=5usize {
                let dim: i64 = lvl
                    .iter()
                    .map(|&l| h_i(d + l, &self.weights, j).unwrap())
                    .sum();
                if dim > 0 {
                    terms.push((-(i as i64), j as i64, dim));
                }
            }
        }
        for &(p, q, _) in &terms {
            for &(p2, q2, _) in &terms {
                if p2 > p && p2 + q2 == p + q + 1 {
                    return Err(CohomologyError::Undetermined(d));
                }
            }
        }
        let mut h = [0i64; 3];
        for &(p, q, dim) in &terms {
            let m = p + q;
            if !(0..=2).contains(&m) {
                return Err(CohomologyError::Undetermined(d));
            }
            h[m as usize] += dim;
        }
        Ok(h)
    }

    /// `omega_S = omega_ambient + s`.
    pub fn dualizing_twist(&self) -> Bidegree {
        ambient_canonical(&self.weights) + self.s
    }

    /// Relative dualizing twist over `P^1`: `omega_S + (2, 0)`.
    pub fn relative_twist(&self) -> Bidegree {
        self.dualizing_twist() + Bidegree::new(2, 0)
    }

    /// `chi(R_k) = chi(O_S(k * relative twist))`, `k >= 2`.
    pub fn chi_rk(&self, k: i64) -> Result<i64, CohomologyError> {
        if k < 2 {
            return Err(CohomologyError::KTooSmall(k));
        }
        Ok(self.chi(self.relative_twist().scale(k)))
    }

    /// `K^2` from consecutive values of `chi(R_k)`:
    /// `chi(R_{k+1}) - chi(R_k) = k K^2 + 8`.
    pub fn k2_from(&self, k: i64) -> Result<i64, CohomologyError> {
        let diff = self.chi_rk(k + 1)? - self.chi_rk(k)? + 2 * (1 - FIBRE_GENUS);
        if diff % k != 0 {
            return Err(CohomologyError::InconsistentK2(alloc::vec![(k, diff)]));
        }
        Ok(diff / k)
    }

    pub fn invariants(&self) -> Result<FibrationInvariants, CohomologyError> {
        let p_g = self.cohomology(self.dualizing_twist())?[0];
        let h = self.cohomology(Bidegree::default())?;
        let q = h[1];
        let chi_os = self.chi(Bidegree::default());
        let chi_fibre = 1 - FIBRE_GENUS;
        let chi_f = chi_os - chi_fibre;
        let k2 = self.k2_from(2)?;
        let k2_check = self.k2_from(3)?;
        if k2 != k2_check {
            return Err(CohomologyError::InconsistentK2(alloc::vec![(2, k2), (3, k2_check)]));
        }
        // chi(R_k) = chi_f + C(k,2) K^2 - (2k-1) chi(O_F)
        let from_rk = self.chi_rk(2)? - k2 + 3 * chi_fibre;
        if from_rk != chi_f {
            return Err(CohomologyError::InconsistentChi {
                from_structure_sheaf: chi_f,
                from_rk,
            });
        }
        let predicted4 = chi_f + 6 * k2 - 7 * chi_fibre;
        if predicted4 != self.chi_rk(4)? {
            return Err(CohomologyError::InconsistentK2(alloc::vec![(4, self.chi_rk(4)?)]));
        }
        Ok(FibrationInvariants {
            p_g,
            q,
            chi_os,
            chi_f,
            k2,
            e_f: 12 * chi_f - k2,
        })
    }
}

/// Rank, Euler characteristic and degree of `R_k` on a base of genus
/// `base_genus`, from the relative invariants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankChiDeg {
    pub rank: i64,
    pub chi: i64,
    pub deg: i64,
}

pub fn expected_rank_chi_deg(
    k: i64,
    g: i64,
    base_genus: i64,
    inv: &FibrationInvariants,
) -> RankChiDeg {
    let (rank, deg) = match k {
        0 => (1, 0),
        1 => (g, inv.chi_f),
        _ => ((2 * k - 1) * (g - 1), inv.chi_f + k * (k - 1) / 2 * inv.k2),
    };
    RankChiDeg {
        rank,
        deg,
        chi: deg + rank * (1 - base_genus),
    }
}

/// Outcome of pointwise rank checks of the resolution's matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessReport {
    pub samples: usize,
    /// Samples where the ranks were not `(1, 4, 1)` or a composition was
    /// nonzero.
    pub failures: usize,
}

impl ExactnessReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Evaluate `Pf`, `M` and `Pf^T` at random ambient points (random `t` and
/// random `x`) and check the ranks and compositions of a pointwise exact
/// complex off the surface.
pub fn validate_exactness<R: Rng + ?Sized>(
    m: &PfaffianModel,
    samples: usize,
    mode: FieldMode,
    rng: &mut R,
) -> ExactnessReport {
    let pf = m.pfaffians().signed();
    let mat = m.matrix();
    let mut failures = 0;
    for _ in 0..samples {
        let point: Vec<Scalar> = (0..AMBIENT_VARS)
            .map(|_| Scalar::random(mode, rng))
            .collect();
        let ev = |p: &crate::poly::Polynomial| {
            p.eval(&point).unwrap_or_else(|| Scalar::zero(mode))
        };
        let s: Vec<Scalar> = pf.iter().map(ev).collect();
        let row = FieldMatrix::from_rows(mode, alloc::vec![s.clone()]);
        let col = row.transpose();
        let mm = FieldMatrix::from_rows(
            mode,
            mat.iter().map(|r| r.iter().map(ev).collect()).collect(),
        );
        let ok = row.rank() == 1
            && mm.rank() == 4
            && row.mul(&mm).is_zero()
            && mm.mul(&col).is_zero();
        if !ok {
            failures += 1;
        }
    }
    ExactnessReport { samples, failures }
}

/// [`validate_exactness`] with a ChaCha8 stream from `seed`, in the model's field.
pub fn validate_exactness_seeded(m: &PfaffianModel, samples: usize, seed: u64) -> ExactnessReport {
    use rand::SeedableRng;
    let mode = m.mode().unwrap_or(FieldMode::Rational);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    validate_exactness(m, samples, mode, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pfaffian::{family_a, random_quadrics};

    const W0: AmbientWeights = AmbientWeights::zero();

    fn b(t: i64, x: i64) -> Bidegree {
        Bidegree::new(t, x)
    }

    fn family_a_degrees(n: i64) -> [Bidegree; 5] {
        [b(n, 3), b(0, 3), b(n, 2), b(n, 2), b(n, 2)]
    }

    #[test]
    fn line_bundle_values() {
        assert_eq!(h_i(b(0, 0), &W0, 0).unwrap(), 1);
        assert!((1..=5).all(|i| h_i(b(0, 0), &W0, i).unwrap() == 0));
        for n in 1..4 {
            assert_eq!(h_i(b(2 * n - 2, 1), &W0, 0).unwrap(), 5 * (2 * n - 1));
        }
        assert_eq!(h_i(b(-2, 0), &W0, 1).unwrap(), 1);
        assert_eq!(h_i(b(-2, -5), &W0, 5).unwrap(), 1);
    }

    #[test]
    fn resolution_levels() {
        let c = FreeComplex::from_pfaffian_degrees(family_a_degrees(1), W0).unwrap();
        assert_eq!(c.levels[1], [b(-1, -3), b(0, -3), b(-1, -2), b(-1, -2), b(-1, -2)]);
        assert_eq!(c.levels[3], [b(-2, -6)]);
        let c3 = FreeComplex::from_pfaffian_degrees(family_a_degrees(3), W0).unwrap();
        assert_eq!(c3.levels[3], [b(-6, -6)]);
        let deg = FreeComplex::from_pfaffian_degrees([b(0, 2); 5], W0).unwrap();
        assert_eq!(deg.s, b(0, 5));
        assert_eq!(deg.levels[2], [b(0, -3); 5]);
        assert_eq!(
            FreeComplex::from_pfaffian_degrees([b(1, 2), b(0, 2), b(0, 2), b(0, 2), b(0, 2)], W0),
            Err(CohomologyError::OddDegreeSum(b(1, 10)))
        );
    }

    #[test]
    fn dualizing_twists() {
        for (n, expect) in [(1, b(0, 1)), (2, b(2, 1))] {
            let c = FreeComplex::from_pfaffian_degrees(family_a_degrees(n), W0).unwrap();
            assert_eq!(c.dualizing_twist(), expect);
        }
        let mut c = FreeComplex::from_pfaffian_degrees(family_a_degrees(1), W0).unwrap();
        c.s = b(2, 5);
        assert_eq!(c.dualizing_twist(), b(0, 0));
    }

    #[test]
    fn chi_rk_values() {
        let c1 = FreeComplex::from_pfaffian_degrees(family_a_degrees(1), W0).unwrap();
        assert_eq!(c1.chi_rk(2).unwrap(), 63);
        assert_eq!(c1.chi_rk(3).unwrap(), 153);
        let c2 = FreeComplex::from_pfaffian_degrees(family_a_degrees(2), W0).unwrap();
        assert_eq!(c2.chi_rk(2).unwrap(), 114);
        assert_eq!(c1.chi_rk(1), Err(CohomologyError::KTooSmall(1)));
    }

    #[test]
    fn family_a_invariants() {
        for (n, expect) in [(1, (5, 10, 41)), (2, (15, 20, 82))] {
            let c = FreeComplex::from_pfaffian_degrees(family_a_degrees(n), W0).unwrap();
            let inv = c.invariants().unwrap();
            assert_eq!((inv.p_g, inv.chi_f, inv.k2), expect);
            assert_eq!(inv.q, 0);
        }
        let c = FreeComplex::from_pfaffian_degrees(family_a_degrees(1), W0).unwrap();
        assert_eq!(c.invariants().unwrap().e_f, 79);
    }

    #[test]
    fn rank_chi_deg() {
        let c = FreeComplex::from_pfaffian_degrees(family_a_degrees(1), W0).unwrap();
        let inv = c.invariants().unwrap();
        let r1 = expected_rank_chi_deg(1, 5, 0, &inv);
        assert_eq!((r1.rank, r1.deg), (5, inv.chi_f));
        let r2 = expected_rank_chi_deg(2, 5, 0, &inv);
        assert_eq!((r2.rank, r2.deg), (12, inv.chi_f + inv.k2));
        assert_eq!(r2.chi, c.chi_rk(2).unwrap());
        let r0 = expected_rank_chi_deg(0, 5, 0, &inv);
        assert_eq!((r0.rank, r0.deg, r0.chi), (1, 0, 1));
    }

    #[test]
    fn pointwise_exactness_family_a() {
        use rand::SeedableRng;
        let mode = FieldMode::default_prime();
        let m = family_a(1, random_quadrics(0, mode)).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let r = validate_exactness(&m, 20, mode, &mut rng);
        assert!(r.passed(), "{:?}", r);
    }
}
