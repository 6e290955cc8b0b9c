//! Bihomogeneity diagnostic for a Pfaffian model.
//!
//! A skew matrix has homogeneous Pfaffians when its entries have degrees
//! `deg M_ij = u_i + u_j` for some row weights `u` (possibly half-integral).
//! The diagnostic solves for `u` from the homogeneous entries and lists every
//! entry that is inhomogeneous or disagrees with the solved weights.

use alloc::vec::Vec;
use core::fmt;

use super::{PfaffianModel, UPPER};
use crate::poly::{AmbientWeights, Bidegree, BidegreeError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryDegrees {
    pub position: (usize, usize),
    /// Distinct term bidegrees; empty for a zero entry.
    pub degrees: Vec<Bidegree>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewViolation {
    pub position: (usize, usize),
    pub found: Vec<Bidegree>,
    pub expected: Bidegree,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneityReport {
    pub weights: AmbientWeights,
    pub entries: Vec<EntryDegrees>,
    pub inhomogeneous_entries: Vec<(usize, usize)>,
    /// Twice the row weights `u_i`, when every row could be solved.
    pub doubled_row_weights: Option<[Bidegree; 5]>,
    pub violations: Vec<SkewViolation>,
    pub pfaffian_degrees: Vec<Result<Bidegree, BidegreeError>>,
    pub homogeneous: bool,
}

impl HomogeneityReport {
    pub fn compute(model: &PfaffianModel) -> Self {
        let w = model.weights;
        let entries: Vec<EntryDegrees> = UPPER
            .iter()
            .zip(model.upper())
            .map(|(&position, p)| EntryDegrees {
                position,
                degrees: p.term_bidegrees(&w).into_iter().collect(),
            })
            .collect();
        let inhomogeneous_entries: Vec<_> = entries
            .iter()
            .filter(|e| e.degrees.len() > 1)
            .map(|e| e.position)
            .collect();
        let known = |i: usize, j: usize| -> Option<Bidegree> {
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            let e = entries.iter().find(|e| e.position == (a, b))?;
            (e.degrees.len() == 1).then(|| e.degrees[0])
        };
        let doubled = solve_row_weights(&known);
        let mut violations = Vec::new();
        if let Some(u) = &doubled {
            for e in &entries {
                let (i, j) = e.position;
                let sum = u[i] + u[j];
                let expected = Bidegree::new(sum.t / 2, sum.x / 2);
                let ok = e.degrees.is_empty()
                    || (sum.t % 2 == 0 && sum.x % 2 == 0 && e.degrees == [expected]);
                if !ok {
                    violations.push(SkewViolation {
                        position: e.position,
                        found: e.degrees.clone(),
                        expected,
                    });
                }
            }
        }
        let pfaffian_degrees: Vec<_> = model.pfaffians().bidegrees(&w).into_iter().collect();
        let homogeneous = inhomogeneous_entries.is_empty()
            && violations.is_empty()
            && pfaffian_degrees.iter().all(|d| d.is_ok());
        HomogeneityReport {
            weights: w,
            entries,
            inhomogeneous_entries,
            doubled_row_weights: doubled,
            violations,
            pfaffian_degrees,
            homogeneous,
        }
    }

    /// Bidegrees of the five Pfaffians, if all are homogeneous.
    pub fn pfaffian_bidegrees(&self) -> Option<[Bidegree; 5]> {
        let v: Vec<Bidegree> = self
            .pfaffian_degrees
            .iter()
            .map(|d| d.as_ref().ok().copied())
            .collect::<Option<_>>()?;
        v.try_into().ok()
    }
}

/// Solve `2u` from a lexicographically first closed triangle of known
/// entries, then propagate along known entries.
pub(crate) fn solve_row_weights(
    known: &dyn Fn(usize, usize) -> Option<Bidegree>,
) -> Option<[Bidegree; 5]> {
    let mut u: [Option<Bidegree>; 5] = [None; 5];
    'outer: for i in 0..5 {
        for j in i + 1..5 {
            for k in j + 1..5 {
                if let (Some(ij), Some(ik), Some(jk)) = (known(i, j), known(i, k), known(j, k)) {
                    let ui = ij + ik - jk;
                    u[i] = Some(ui);
                    u[j] = Some(ij.scale(2) - ui);
                    u[k] = Some(ik.scale(2) - ui);
                    break 'outer;
                }
            }
        }
    }
    u.iter().find(|x| x.is_some())?;
    loop {
        let mut changed = false;
        for l in 0..5 {
            if u[l].is_some() {
                continue;
            }
            for i in 0..5 {
                if let (Some(ui), Some(d)) = (u[i], known(i, l)) {
                    u[l] = Some(d.scale(2) - ui);
                    changed = true;
                    break;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let out: Vec<Bidegree> = u.iter().copied().collect::<Option<_>>()?;
    out.try_into().ok()
}

impl fmt::Display for HomogeneityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "weights {}", self.weights)?;
        for e in &self.entries {
            let degs: Vec<_> = e.degrees.iter().map(|d| alloc::format!("{}", d)).collect();
            let tag = if e.degrees.len() > 1 { "  INHOMOGENEOUS" } else { "" };
            writeln!(
                f,
                "  M{}{}: {}{}",
                e.position.0,
                e.position.1,
                if degs.is_empty() { "zero".into() } else { degs.join(", ") },
                tag
            )?;
        }
        match &self.doubled_row_weights {
            Some(u) => {
                let s: Vec<_> = u.iter().map(|d| alloc::format!("{}", d)).collect();
                writeln!(f, "  doubled row weights: {}", s.join(" "))?;
            }
            None => writeln!(f, "  row weights: unsolvable")?,
        }
        for v in &self.violations {
            let found: Vec<_> = v.found.iter().map(|d| alloc::format!("{}", d)).collect();
            writeln!(
                f,
                "  M{}{} has {} but the other entries force {}",
                v.position.0,
                v.position.1,
                found.join(", "),
                v.expected
            )?;
        }
        for (i, d) in self.pfaffian_degrees.iter().enumerate() {
            match d {
                Ok(b) => writeln!(f, "  Pf{}: {}", i, b)?,
                Err(e) => writeln!(f, "  Pf{}: {}", i, e)?,
            }
        }
        write!(f, "  verdict: {}", if self.homogeneous { "homogeneous" } else { "inhomogeneous" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pfaffian::{random_quadrics, Family, ModelError};
    use crate::scalar::FieldMode;

    #[test]
    fn stated_family_b_is_flagged() {
        let fam = Family::B { a: 1 };
        let qs = fam.random_qs(0, FieldMode::Rational, &fam.weights(), fam.stated_q_bidegrees());
        let err = fam.build(qs).unwrap_err();
        let ModelError::Inhomogeneous(report) = err else {
            panic!("expected a diagnostic")
        };
        let bad: Vec<_> = report.violations.iter().map(|v| v.position).collect();
        assert_eq!(bad, [(2, 3), (2, 4), (3, 4)]);
        assert!(report.violations.iter().all(|v| v.expected == Bidegree::new(0, 2)));
    }

    #[test]
    fn stated_family_c_is_consistent() {
        let fam = Family::C { d: 1 };
        let qs = fam.random_qs(0, FieldMode::Rational, &fam.weights(), fam.stated_q_bidegrees());
        let m = fam.build(qs).unwrap();
        let r = m.homogeneity();
        assert!(r.homogeneous);
        assert_eq!(
            r.pfaffian_bidegrees().unwrap(),
            [(1, 3), (0, 3), (1, 2), (2, 2), (2, 2)].map(|(t, x)| Bidegree::new(t, x))
        );
    }

    #[test]
    fn inhomogeneous_entry_listed() {
        let w = AmbientWeights::new([1, 0, 0, 0, 0]).unwrap();
        let m = Family::A { n: 1 }.assemble(random_quadrics(0, FieldMode::Rational), w);
        let r = m.homogeneity();
        assert!(!r.homogeneous);
        assert!(r.pfaffian_degrees.iter().any(|d| d.is_err()));
    }
}
