//! Consistency of the scroll gradings of the explicit families.
//!
//! The seven fixed entries of a family matrix are single monomials, so under
//! any scroll weights they are homogeneous; what can fail is the skew
//! condition `deg M_ij = u_i + u_j`. When it holds, the row weights force the
//! bidegrees of the three quadrics and of all five Pfaffians, and with them
//! every invariant that follows from the resolution.

use alloc::vec::Vec;
use core::fmt;

use crate::cohomology::{CohomologyError, FibrationInvariants, FreeComplex};
use crate::pfaffian::homogeneity::solve_row_weights;
use crate::pfaffian::{Family, HomogeneityReport, ModelError, PfaffianModel, UPPER};
use crate::poly::{monomial_basis, AmbientWeights, Bidegree};
use crate::scalar::FieldMode;

impl Family {
    /// Geometric genus claimed for the family.
    pub fn target_p_g(&self) -> i64 {
        match *self {
            Family::A { n } => 5 * (2 * n as i64 - 1),
            Family::B { a } => 2 * a as i64 + 5,
            Family::C { d } => 2 * d as i64 + 4,
        }
    }
}

/// A scroll grading under which the fixed entries are skew-consistent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradingCandidate {
    pub weights: AmbientWeights,
    pub q_degrees: [Bidegree; 3],
    pub pfaffian_degrees: [Bidegree; 5],
    /// Whether every quadric space is nonzero.
    pub q_spaces_nonzero: bool,
    pub dualizing_twist: Option<Bidegree>,
    pub invariants: Result<FibrationInvariants, CohomologyError>,
}

impl GradingCandidate {
    pub fn p_g(&self) -> Option<i64> {
        self.invariants.as_ref().ok().map(|i| i.p_g)
    }
}

/// Row weights, forced quadric degrees and Pfaffian degrees for `weights`,
/// or `None` if the fixed entries are not skew-consistent.
pub fn forced_grading(family: Family, weights: AmbientWeights) -> Option<GradingCandidate> {
    let fixed = family.fixed_entries(FieldMode::Rational);
    let degrees: Vec<Bidegree> = fixed
        .iter()
        .map(|p| p.bidegree(&weights).expect("monomial entries"))
        .collect();
    let known = |i: usize, j: usize| -> Option<Bidegree> {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        UPPER[..7].iter().position(|&p| p == (a, b)).map(|k| degrees[k])
    };
    let u = solve_row_weights(&known)?;
    let half = |d: Bidegree| (d.t % 2 == 0 && d.x % 2 == 0).then(|| Bidegree::new(d.t / 2, d.x / 2));
    for (k, &(i, j)) in UPPER[..7].iter().enumerate() {
        if half(u[i] + u[j]) != Some(degrees[k]) {
            return None;
        }
    }
    let q_degrees = [half(u[2] + u[3])?, half(u[2] + u[4])?, half(u[3] + u[4])?];
    let total = u.iter().fold(Bidegree::default(), |a, &b| a + b);
    let mut pfaffian_degrees = [Bidegree::default(); 5];
    for i in 0..5 {
        pfaffian_degrees[i] = half(total - u[i])?;
    }
    let q_spaces_nonzero = q_degrees
        .iter()
        .all(|&d| !monomial_basis(d, &weights).is_empty());
    let complex = FreeComplex::from_pfaffian_degrees(pfaffian_degrees, weights);
    let dualizing_twist = complex.as_ref().ok().map(|c| c.dualizing_twist());
    let invariants = complex.and_then(|c| c.invariants());
    Some(GradingCandidate {
        weights,
        q_degrees,
        pfaffian_degrees,
        q_spaces_nonzero,
        dualizing_twist,
        invariants,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradingVerdict {
    /// The stated grading is consistent and reproduces the claimed `p_g`.
    Certified,
    /// No grading in the searched box reproduces the claimed data.
    Inconsistent,
}

impl GradingVerdict {
    pub fn name(self) -> &'static str {
        match self {
            GradingVerdict::Certified => "certified",
            GradingVerdict::Inconsistent => "inconsistent",
        }
    }
}

/// Outcome of checking a family's stated grading and searching a box of
/// alternative weights.
#[derive(Debug, Clone)]
pub struct GradingReport {
    pub family: Family,
    pub stated_weights: AmbientWeights,
    pub stated_q_degrees: [Bidegree; 3],
    /// Diagnostic for the matrix with seeded quadrics of the stated degrees.
    pub stated: HomogeneityReport,
    /// The grading forced by the stated weights, if any.
    pub forced: Option<GradingCandidate>,
    /// Whether the forced quadric degrees agree with the stated ones.
    pub stated_q_degrees_consistent: bool,
    pub target_p_g: i64,
    /// Weights are searched in `0..=box_max` for each coordinate.
    pub box_max: i64,
    /// Consistent gradings with nonzero quadric spaces, in search order.
    pub candidates: Vec<GradingCandidate>,
    pub verdict: GradingVerdict,
}

impl GradingReport {
    /// Candidates whose computed `p_g` equals the claimed one.
    pub fn matching(&self) -> impl Iterator<Item = &GradingCandidate> {
        self.candidates
            .iter()
            .filter(move |c| c.p_g() == Some(self.target_p_g))
    }

    /// The model to run the full pipeline on: stated weights with the forced
    /// quadric degrees.
    pub fn corrected_model(&self, seed: u64, mode: FieldMode) -> Result<PfaffianModel, ModelError> {
        let forced = self.forced.as_ref().ok_or_else(|| {
            ModelError::Inhomogeneous(alloc::boxed::Box::new(self.stated.clone()))
        })?;
        let qs = self.family.random_qs(seed, mode, &self.stated_weights, forced.q_degrees);
        self.family.build(qs)
    }
}

/// Default search box: one more than the largest stated weight.
pub fn default_box(family: Family) -> i64 {
    family.weights().0.iter().copied().max().unwrap_or(0) + 1
}

pub fn grading_search(family: Family, seed: u64, box_max: i64) -> GradingReport {
    let mode = FieldMode::Rational;
    let stated_weights = family.weights();
    let stated_q_degrees = family.stated_q_bidegrees();
    let qs = family.random_qs(seed, mode, &stated_weights, stated_q_degrees);
    let stated = family.assemble(qs, stated_weights).homogeneity();
    let forced = forced_grading(family, stated_weights);
    let stated_q_degrees_consistent = forced
        .as_ref()
        .is_some_and(|f| f.q_degrees == stated_q_degrees);
    let mut candidates = Vec::new();
    let side = (box_max + 1) as usize;
    for code in 0..side.pow(5) {
        let mut w = [0i64; 5];
        let mut c = code;
        for slot in w.iter_mut().rev() {
            *slot = (c % side) as i64;
            c /= side;
        }
        let weights = AmbientWeights::new(w).expect("nonnegative");
        if let Some(g) = forced_grading(family, weights) {
            if g.q_spaces_nonzero {
                candidates.push(g);
            }
        }
    }
    let target_p_g = family.target_p_g();
    let certified = stated.homogeneous
        && stated_q_degrees_consistent
        && forced.as_ref().and_then(|f| f.p_g()) == Some(target_p_g);
    GradingReport {
        family,
        stated_weights,
        stated_q_degrees,
        stated,
        forced,
        stated_q_degrees_consistent,
        target_p_g,
        box_max,
        candidates,
        verdict: if certified {
            GradingVerdict::Certified
        } else {
            GradingVerdict::Inconsistent
        },
    }
}

fn degs(d: &[Bidegree]) -> alloc::string::String {
    let v: Vec<_> = d.iter().map(|b| alloc::format!("{}", b)).collect();
    v.join(" ")
}

impl fmt::Display for GradingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.family.label())?;
        writeln!(
            f,
            "stated weights {} with quadrics of bidegree {}",
            self.stated_weights,
            degs(&self.stated_q_degrees)
        )?;
        writeln!(f, "{}", self.stated)?;
        match &self.forced {
            None => writeln!(f, "the fixed entries admit no row weights")?,
            Some(g) => {
                writeln!(
                    f,
                    "fixed entries force quadrics {} and Pfaffians {}",
                    degs(&g.q_degrees),
                    degs(&g.pfaffian_degrees)
                )?;
                if let Some(w) = g.dualizing_twist {
                    writeln!(f, "dualizing sheaf O_S{}", w)?;
                }
                match &g.invariants {
                    Ok(i) => writeln!(
                        f,
                        "p_g = {} (claimed {}), chi_f = {}, K^2 = {}",
                        i.p_g, self.target_p_g, i.chi_f, i.k2
                    )?,
                    Err(e) => writeln!(f, "invariants unavailable: {}", e)?,
                }
            }
        }
        let matching: Vec<_> = self.matching().map(|c| alloc::format!("{}", c.weights)).collect();
        writeln!(
            f,
            "{} consistent gradings with weights in 0..={}, {} with p_g = {}{}{}",
            self.candidates.len(),
            self.box_max,
            matching.len(),
            self.target_p_g,
            if matching.is_empty() { "" } else { ": " },
            matching.join(", ")
        )?;
        write!(f, "verdict: {}", self.verdict.name())
    }
}
