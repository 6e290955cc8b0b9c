//! 5x5 skew-symmetric Pfaffian models and their five 4x4 sub-Pfaffians.

mod families;
pub(crate) mod homogeneity;

pub use families::{
    family_a, family_b, family_c, local_model, local_model_symbolic, random_forms,
    random_quadrics, Family, LocalModelParts,
};
pub use homogeneity::{EntryDegrees, HomogeneityReport, SkewViolation};

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::poly::{AmbientWeights, Bidegree, BidegreeError, Polynomial};
use crate::scalar::FieldMode;

/// Upper-triangle positions in storage order.
pub const UPPER: [(usize, usize); 10] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (1, 2),
    (1, 3),
    (1, 4),
    (2, 3),
    (2, 4),
    (3, 4),
];

pub fn upper_index(i: usize, j: usize) -> Option<usize> {
    UPPER.iter().position(|&p| p == (i, j))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("matrix is not skew-symmetric at ({0},{1})")]
    NotSkew(usize, usize),
    #[error("entries use more than one coefficient field")]
    MixedModes,
    #[error("{name} must be {expected}: got {found}")]
    WrongDegree {
        name: String,
        expected: &'static str,
        found: String,
    },
    #[error("family parameter must be positive")]
    ZeroParameter,
    #[error("Pfaffian system is not bihomogeneous")]
    Inhomogeneous(Box<HomogeneityReport>),
}

/// Ambient weights plus the upper triangle of a skew 5x5 polynomial matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PfaffianModel {
    pub label: String,
    pub weights: AmbientWeights,
    upper: [Polynomial; 10],
    pub seed: Option<u64>,
}

/// The five sub-Pfaffians: `Pf_i` is the Pfaffian of the 4x4 block obtained
/// by deleting row and column `i`, for indices `a<b<c<d` equal to
/// `M_ab M_cd - M_ac M_bd + M_ad M_bc`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PfaffianSystem {
    pub c1: Polynomial,
    pub c2: Polynomial,
    pub p1: Polynomial,
    pub p2: Polynomial,
    pub p3: Polynomial,
}

impl PfaffianSystem {
    /// `[c1, c2, p1, p2, p3]`.
    pub fn all(&self) -> [Polynomial; 5] {
        [
            self.c1.clone(),
            self.c2.clone(),
            self.p1.clone(),
            self.p2.clone(),
            self.p3.clone(),
        ]
    }

    /// `(-1)^i Pf_i`, the vector annihilated by the matrix.
    pub fn signed(&self) -> [Polynomial; 5] {
        [
            self.c1.clone(),
            -&self.c2,
            self.p1.clone(),
            -&self.p2,
            self.p3.clone(),
        ]
    }

    pub fn bidegrees(&self, w: &AmbientWeights) -> [Result<Bidegree, BidegreeError>; 5] {
        self.all().map(|p| p.bidegree(w))
    }
}

impl PfaffianModel {
    pub fn new(
        label: impl Into<String>,
        weights: AmbientWeights,
        upper: [Polynomial; 10],
    ) -> Result<Self, ModelError> {
        let mut modes = upper.iter().filter_map(|p| p.mode());
        if let Some(m) = modes.next() {
            if modes.any(|o| o != m) {
                return Err(ModelError::MixedModes);
            }
        }
        Ok(PfaffianModel {
            label: label.into(),
            weights,
            upper,
            seed: None,
        })
    }

    /// From a full 5x5 matrix; requires `M = -M^T` with zero diagonal.
    pub fn from_matrix(
        label: impl Into<String>,
        weights: AmbientWeights,
        m: &[[Polynomial; 5]; 5],
    ) -> Result<Self, ModelError> {
        for i in 0..5 {
            if !m[i][i].is_zero() {
                return Err(ModelError::NotSkew(i, i));
            }
            for j in i + 1..5 {
                if m[i][j] != -&m[j][i] {
                    return Err(ModelError::NotSkew(i, j));
                }
            }
        }
        Self::new(label, weights, UPPER.map(|(i, j)| m[i][j].clone()))
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn upper(&self) -> &[Polynomial; 10] {
        &self.upper
    }

    pub fn mode(&self) -> Option<FieldMode> {
        self.upper.iter().find_map(|p| p.mode())
    }

    /// `M_ij` with skew symmetry applied.
    pub fn entry(&self, i: usize, j: usize) -> Polynomial {
        use core::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => Polynomial::zero(),
            Less => self.upper[upper_index(i, j).unwrap()].clone(),
            Greater => -&self.upper[upper_index(j, i).unwrap()],
        }
    }

    pub fn matrix(&self) -> [[Polynomial; 5]; 5] {
        core::array::from_fn(|i| core::array::from_fn(|j| self.entry(i, j)))
    }

    pub fn pfaffians(&self) -> PfaffianSystem {
        let [c1, c2, p1, p2, p3] = core::array::from_fn(|i| self.sub_pfaffian(i));
        PfaffianSystem { c1, c2, p1, p2, p3 }
    }

    /// Pfaffian of the block with row and column `skip` deleted.
    pub fn sub_pfaffian(&self, skip: usize) -> Polynomial {
        let idx: Vec<usize> = (0..5).filter(|&k| k != skip).collect();
        let (a, b, c, d) = (idx[0], idx[1], idx[2], idx[3]);
        let e = |i, j| self.entry(i, j);
        &(&(&e(a, b) * &e(c, d)) - &(&e(a, c) * &e(b, d))) + &(&e(a, d) * &e(b, c))
    }

    /// `M * ((-1)^i Pf_i)`; identically zero for any skew matrix.
    pub fn syzygy_residual(&self) -> [Polynomial; 5] {
        let s = self.pfaffians().signed();
        core::array::from_fn(|i| {
            (0..5).fold(Polynomial::zero(), |acc, j| {
                &acc + &(&self.entry(i, j) * &s[j])
            })
        })
    }

    pub fn homogeneity(&self) -> HomogeneityReport {
        HomogeneityReport::compute(self)
    }

    /// Rescale the matrix entries in a copy; used for invariance checks.
    pub fn map_entries(&self, f: impl Fn(usize, &Polynomial) -> Polynomial) -> PfaffianModel {
        let mut out = self.clone();
        for (k, p) in out.upper.iter_mut().enumerate() {
            *p = f(k, p);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse;

    const Q: FieldMode = FieldMode::Rational;

    fn p(s: &str) -> Polynomial {
        parse(s, Q).unwrap()
    }

    #[test]
    fn family_a_matches_displayed_equations() {
        let q1 = p("x0^2 + 3*x1*x4");
        let q2 = p("x2*x3 - x4^2");
        let q3 = p("x1^2 + 2*x0*x2");
        let m = family_a(1, [q1.clone(), q2.clone(), q3.clone()]).unwrap();
        let pf = m.pfaffians();
        let t0 = p("t0");
        let t1 = p("t1");
        let x = |i: usize| Polynomial::x(i, Q);
        assert_eq!(pf.c1, &t0 * &(&(&(&x(1) * &q3) - &(&x(3) * &q2)) + &(&x(4) * &q1)));
        assert_eq!(pf.c2, &(&(&x(0) * &q3) - &(&x(2) * &q2)) + &(&x(3) * &q1));
        assert_eq!(pf.p1, &(&t1 * &q3) + &(&t0 * &p("-x2*x4 + x3^2")));
        assert_eq!(pf.p2, &(&t1 * &q2) + &(&t0 * &p("-x0*x4 + x1*x3")));
        assert_eq!(pf.p3, &(&t1 * &q1) + &(&t0 * &p("-x0*x3 + x1*x2")));
        assert!(m.syzygy_residual().iter().all(|r| r.is_zero()));
    }

    #[test]
    fn rejects_non_skew() {
        let z = Polynomial::zero;
        let mut m: [[Polynomial; 5]; 5] = core::array::from_fn(|_| core::array::from_fn(|_| z()));
        m[0][1] = p("x0");
        m[1][0] = p("x0");
        let err = PfaffianModel::from_matrix("bad", AmbientWeights::zero(), &m).unwrap_err();
        assert_eq!(err, ModelError::NotSkew(0, 1));
    }
}
