//! The JSON report, its sections, and the plain-text table.

use std::fmt;

use serde::Serialize;
use trigon_core::cohomology::{validate_exactness_seeded, CohomologyError, FreeComplex};
use trigon_core::fiber::{self, FiberClassification, FiberError, ProbeOutcome, Verdict};
use trigon_core::grading::{GradingCandidate, GradingReport};
use trigon_core::horikawa::{HorikawaReport, SlopeReport, TorsionSheaf};
use trigon_core::pfaffian::{Family, PfaffianModel, UPPER};
use trigon_core::{BasePoint, Bidegree, FieldMode, Scalar};

pub const TOOL: &str = "trigon";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

fn pair(b: Bidegree) -> [i64; 2] {
    [b.t, b.x]
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub model: ModelEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<InvariantsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fibers: Option<FibersSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horikawa: Option<HorikawaSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub koszul: Option<KoszulSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope: Option<SlopeSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grading: Option<GradingSection>,
    /// `PASS` or `FAIL`.
    pub verdict: &'static str,
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Vec<StageTime>>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StageTime {
    pub stage: &'static str,
    pub milliseconds: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyEcho {
    pub name: String,
    pub parameter: u32,
    pub forced_grading: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Entry {
    pub position: String,
    pub polynomial: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelEcho {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub field: String,
    pub weights: [i64; 5],
    pub entries: Vec<Entry>,
}

impl ModelEcho {
    pub fn new(m: &PfaffianModel, mode: FieldMode, family: Option<FamilyEcho>, path: Option<String>) -> Self {
        ModelEcho {
            label: m.label.clone(),
            family,
            path,
            field: mode.to_string(),
            weights: m.weights.0,
            entries: UPPER
                .iter()
                .zip(m.upper())
                .map(|(&(i, j), p)| Entry {
                    position: format!("m{}{}", i, j),
                    polynomial: p.to_string(),
                })
                .collect(),
        }
    }
}

pub fn family_echo(family: Family, forced_grading: bool) -> FamilyEcho {
    let name = match family {
        Family::A { .. } => "A",
        Family::B { .. } => "B",
        Family::C { .. } => "C",
    };
    FamilyEcho {
        name: name.to_string(),
        parameter: family.parameter(),
        forced_grading,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChiValue {
    pub k: i64,
    pub chi: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantsSection {
    pub pfaffian_degrees: Option<Vec<[i64; 2]>>,
    pub dualizing_twist: Option<[i64; 2]>,
    pub p_g: Option<i64>,
    pub q: Option<i64>,
    pub chi_os: Option<i64>,
    pub chi_f: Option<i64>,
    pub k2: Option<i64>,
    pub e_f: Option<i64>,
    pub chi_rk: Vec<ChiValue>,
    /// The value stated for a builtin family, compared with the computed one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claimed_p_g: Option<ClaimedValue>,
    pub exactness: Exactness,
    pub error: Option<String>,
}

/// Pointwise rank checks of the Pfaffian complex.
#[derive(Debug, Clone, Serialize)]
pub struct Exactness {
    pub samples: usize,
    pub failures: usize,
}

/// Random ambient points for the exactness check.
pub const EXACTNESS_SAMPLES: usize = 20;

#[derive(Debug, Clone, Serialize)]
pub struct ClaimedValue {
    pub value: i64,
    pub matches: bool,
}

pub fn invariants_section(m: &PfaffianModel, family: Option<Family>, seed: u64) -> InvariantsSection {
    let exact = validate_exactness_seeded(m, EXACTNESS_SAMPLES, seed);
    let complex = FreeComplex::from_model(m);
    let inv = complex.as_ref().map_err(Clone::clone).and_then(|c| c.invariants());
    let chi_rk = match &complex {
        Ok(c) => (2..=6)
            .filter_map(|k| c.chi_rk(k).ok().map(|chi| ChiValue { k, chi }))
            .collect(),
        Err(_) => Vec::new(),
    };
    let ok = inv.as_ref().ok();
    InvariantsSection {
        pfaffian_degrees: complex
            .as_ref()
            .ok()
            .map(|c| c.pfaffian_degrees.iter().map(|&d| pair(d)).collect()),
        dualizing_twist: complex.as_ref().ok().map(|c| pair(c.dualizing_twist())),
        p_g: ok.map(|i| i.p_g),
        q: ok.map(|i| i.q),
        chi_os: ok.map(|i| i.chi_os),
        chi_f: ok.map(|i| i.chi_f),
        k2: ok.map(|i| i.k2),
        e_f: ok.map(|i| i.e_f),
        chi_rk,
        claimed_p_g: family.map(|f| ClaimedValue {
            value: f.target_p_g(),
            matches: ok.map(|i| i.p_g) == Some(f.target_p_g()),
        }),
        exactness: Exactness {
            samples: exact.samples,
            failures: exact.failures,
        },
        error: inv.err().map(|e: CohomologyError| e.to_string()),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FiberRow {
    pub point: String,
    pub quadrics: Option<usize>,
    pub cubics: Option<usize>,
    pub coker_mu: Option<usize>,
    pub verdict: String,
}

impl FiberRow {
    fn from_result(point: &BasePoint, r: Result<FiberClassification, FiberError>) -> Self {
        match r {
            Ok(c) => FiberRow {
                point: point.to_string(),
                quadrics: Some(c.quadric_dim),
                cubics: Some(c.cubic_dim),
                coker_mu: c.coker_mu_dim,
                verdict: c.verdict.name().to_string(),
            },
            Err(e) => FiberRow {
                point: point.to_string(),
                quadrics: None,
                cubics: None,
                coker_mu: None,
                verdict: format!("error: {}", e),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeRow {
    pub point: String,
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points_checked: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FiberCounts {
    pub nontrigonal: usize,
    pub trigonal: usize,
    pub anomalous: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FibersSection {
    pub samples: usize,
    pub special: Vec<FiberRow>,
    pub sampled: Vec<FiberRow>,
    pub counts: FiberCounts,
    pub probes: Vec<ProbeRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe_note: Option<String>,
}

/// Trials per probed fibre.
pub const PROBE_TRIALS: usize = 20;

/// `extra` points are classified along with `(1:0)` and `(0:1)`.
pub fn fibers_section(
    m: &PfaffianModel,
    mode: FieldMode,
    samples: usize,
    probes: usize,
    seed: u64,
    extra: &[BasePoint],
) -> FibersSection {
    let mut special_points = vec![BasePoint::affine(Scalar::zero(mode)), BasePoint::infinity(mode)];
    for p in extra {
        if !special_points.contains(p) {
            special_points.push(p.clone());
        }
    }
    let sampled_points = fiber::random_points(mode, samples, seed, &special_points);
    let row = |p: &BasePoint| FiberRow::from_result(p, fiber::classify(m, p));
    let special: Vec<FiberRow> = special_points.iter().map(row).collect();
    let sampled: Vec<FiberRow> = sampled_points.iter().map(row).collect();
    let mut counts = FiberCounts {
        nontrigonal: 0,
        trigonal: 0,
        anomalous: 0,
        errors: 0,
    };
    for r in special.iter().chain(&sampled) {
        match r.verdict.as_str() {
            v if v == Verdict::Nontrigonal.name() => counts.nontrigonal += 1,
            v if v == Verdict::Trigonal.name() => counts.trigonal += 1,
            v if v == Verdict::Anomalous.name() => counts.anomalous += 1,
            _ => counts.errors += 1,
        }
    }
    let mut probe_rows = Vec::new();
    let mut probe_note = None;
    if probes > 0 && !mode.is_prime_field() {
        probe_note = Some("the smoothness probe needs a prime field".to_string());
    } else {
        for (i, p) in sampled_points.iter().take(probes).enumerate() {
            let outcome = fiber::smoothness_probe(m, p, PROBE_TRIALS, seed.wrapping_add(i as u64));
            probe_rows.push(match outcome {
                Ok(ProbeOutcome::Pass { points_checked }) => ProbeRow {
                    point: p.to_string(),
                    outcome: "pass".into(),
                    points_checked: Some(points_checked),
                    trials: None,
                    witness: None,
                },
                Ok(ProbeOutcome::Inconclusive { trials }) => ProbeRow {
                    point: p.to_string(),
                    outcome: "inconclusive".into(),
                    points_checked: None,
                    trials: Some(trials),
                    witness: None,
                },
                Ok(ProbeOutcome::Fail { witness }) => ProbeRow {
                    point: p.to_string(),
                    outcome: "fail".into(),
                    points_checked: None,
                    trials: None,
                    witness: Some(witness.coordinates.iter().map(|c| c.to_string()).collect()),
                },
                Err(e) => ProbeRow {
                    point: p.to_string(),
                    outcome: format!("error: {}", e),
                    points_checked: None,
                    trials: None,
                    witness: None,
                },
            });
        }
    }
    FibersSection {
        samples,
        special,
        sampled,
        counts,
        probes: probe_rows,
        probe_note,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Stalk {
    pub place: String,
    pub degree: usize,
    pub length: usize,
    pub exponents: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SheafEcho {
    pub support: Vec<Stalk>,
    pub total_length: usize,
}

impl SheafEcho {
    fn new(s: &TorsionSheaf) -> Self {
        SheafEcho {
            support: s
                .support
                .iter()
                .map(|e| Stalk {
                    place: e.place.to_string(),
                    degree: e.place.degree(),
                    length: e.length,
                    exponents: e.exponents.clone(),
                })
                .collect(),
            total_length: s.total_length,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HorikawaNumber {
    pub place: String,
    pub value: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeRow {
    pub k: u32,
    pub glued: i64,
    pub expected: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct HorikawaSection {
    pub ranks: Option<[usize; 3]>,
    pub kernel_ranks: Option<[usize; 2]>,
    pub f: Option<SheafEcho>,
    pub horikawa_numbers: Vec<HorikawaNumber>,
    pub horikawa_sum: Option<usize>,
    pub even: Option<bool>,
    pub degrees: Vec<DegreeRow>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KoszulSection {
    pub k03: Option<SheafEcho>,
    pub k12: Option<SheafEcho>,
    pub k12_matches_f: Option<bool>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityRow {
    pub name: String,
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SlopeSection {
    pub identities: Vec<IdentityRow>,
    pub passed: bool,
}

pub fn horikawa_section(r: &Result<HorikawaReport, trigon_core::horikawa::HorikawaError>) -> HorikawaSection {
    match r {
        Ok(h) => HorikawaSection {
            ranks: Some(h.ranks),
            kernel_ranks: Some([h.kernel_ranks.0, h.kernel_ranks.1]),
            f: Some(SheafEcho::new(&h.horikawa)),
            horikawa_numbers: h
                .horikawa
                .support
                .iter()
                .map(|e| HorikawaNumber {
                    place: e.place.to_string(),
                    value: e.horikawa_number(),
                })
                .collect(),
            horikawa_sum: h.horikawa_sum(),
            even: Some(h.even),
            degrees: h
                .degrees
                .iter()
                .map(|d| DegreeRow {
                    k: d.k,
                    glued: d.glued,
                    expected: d.expected,
                    holds: d.holds(),
                })
                .collect(),
            error: None,
        },
        Err(e) => HorikawaSection {
            ranks: None,
            kernel_ranks: None,
            f: None,
            horikawa_numbers: Vec::new(),
            horikawa_sum: None,
            even: None,
            degrees: Vec::new(),
            error: Some(e.to_string()),
        },
    }
}

pub fn koszul_section(r: &Result<HorikawaReport, trigon_core::horikawa::HorikawaError>) -> KoszulSection {
    match r {
        Ok(h) => KoszulSection {
            k03: Some(SheafEcho::new(&h.k03)),
            k12: Some(SheafEcho::new(&h.k12)),
            k12_matches_f: Some(h.koszul_matches),
            error: None,
        },
        Err(e) => KoszulSection {
            k03: None,
            k12: None,
            k12_matches_f: None,
            error: Some(e.to_string()),
        },
    }
}

pub fn slope_section(s: &SlopeReport) -> SlopeSection {
    SlopeSection {
        identities: s
            .identities
            .iter()
            .map(|c| IdentityRow {
                name: c.name.to_string(),
                lhs: c.lhs,
                rhs: c.rhs,
                holds: c.holds(),
            })
            .collect(),
        passed: s.passed(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateEcho {
    pub weights: [i64; 5],
    pub q_degrees: Vec<[i64; 2]>,
    pub pfaffian_degrees: Vec<[i64; 2]>,
    pub dualizing_twist: Option<[i64; 2]>,
    pub p_g: Option<i64>,
    pub chi_f: Option<i64>,
    pub k2: Option<i64>,
}

impl CandidateEcho {
    fn new(c: &GradingCandidate) -> Self {
        let inv = c.invariants.as_ref().ok();
        CandidateEcho {
            weights: c.weights.0,
            q_degrees: c.q_degrees.iter().map(|&d| pair(d)).collect(),
            pfaffian_degrees: c.pfaffian_degrees.iter().map(|&d| pair(d)).collect(),
            dualizing_twist: c.dualizing_twist.map(pair),
            p_g: inv.map(|i| i.p_g),
            chi_f: inv.map(|i| i.chi_f),
            k2: inv.map(|i| i.k2),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GradingSection {
    pub stated_weights: [i64; 5],
    pub stated_q_degrees: Vec<[i64; 2]>,
    pub stated_homogeneous: bool,
    pub inhomogeneous_entries: Vec<String>,
    pub forced: Option<CandidateEcho>,
    pub stated_q_degrees_consistent: bool,
    pub target_p_g: i64,
    pub box_max: i64,
    pub candidates: usize,
    pub matching: Vec<CandidateEcho>,
    /// `certified` or `inconsistent`.
    pub verdict: &'static str,
    pub text: String,
}

pub fn grading_section(r: &GradingReport) -> GradingSection {
    let mut bad: Vec<String> = r
        .stated
        .inhomogeneous_entries
        .iter()
        .chain(r.stated.violations.iter().map(|v| &v.position))
        .map(|&(i, j)| format!("m{}{}", i, j))
        .collect();
    bad.sort();
    bad.dedup();
    GradingSection {
        stated_weights: r.stated_weights.0,
        stated_q_degrees: r.stated_q_degrees.iter().map(|&d| pair(d)).collect(),
        stated_homogeneous: r.stated.homogeneous,
        inhomogeneous_entries: bad,
        forced: r.forced.as_ref().map(CandidateEcho::new),
        stated_q_degrees_consistent: r.stated_q_degrees_consistent,
        target_p_g: r.target_p_g,
        box_max: r.box_max,
        candidates: r.candidates.len(),
        matching: r.matching().map(CandidateEcho::new).collect(),
        verdict: r.verdict.name(),
        text: r.to_string(),
    }
}

fn opt<T: fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn sheaf_line(s: &SheafEcho) -> String {
    if s.support.is_empty() {
        return "0".to_string();
    }
    let parts: Vec<String> = s
        .support
        .iter()
        .map(|st| format!("{} length {} {:?}", st.place, st.length, st.exponents))
        .collect();
    format!("{} (total {})", parts.join(", "), s.total_length)
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}  {}", self.tool, self.version, self.command)?;
        writeln!(f, "model    {} over {}, weights {:?}, seed {}", self.model.label, self.model.field, self.model.weights, self.seed)?;
        if let Some(inv) = &self.invariants {
            writeln!(f)?;
            match &inv.error {
                Some(e) => writeln!(f, "invariants  error: {}", e)?,
                None => {
                    writeln!(
                        f,
                        "invariants  p_g {}  q {}  chi(O_S) {}  chi_f {}  K^2 {}  e_f {}",
                        opt(&inv.p_g),
                        opt(&inv.q),
                        opt(&inv.chi_os),
                        opt(&inv.chi_f),
                        opt(&inv.k2),
                        opt(&inv.e_f)
                    )?;
                    if let Some(c) = &inv.claimed_p_g {
                        writeln!(f, "            stated p_g {} ({})", c.value, if c.matches { "matches" } else { "differs" })?;
                    }
                    let chis: Vec<String> = inv.chi_rk.iter().map(|c| format!("k={}: {}", c.k, c.chi)).collect();
                    writeln!(f, "chi(R_k)    {}", chis.join("  "))?;
                    writeln!(
                        f,
                        "exactness   {} of {} random points fail",
                        inv.exactness.failures, inv.exactness.samples
                    )?;
                }
            }
        }
        if let Some(fib) = &self.fibers {
            writeln!(f)?;
            writeln!(f, "{:<24} {:>8} {:>7} {:>9}  verdict", "fibre", "quadrics", "cubics", "coker mu")?;
            for r in &fib.special {
                writeln!(f, "{:<24} {:>8} {:>7} {:>9}  {}", r.point, opt(&r.quadrics), opt(&r.cubics), opt(&r.coker_mu), r.verdict)?;
            }
            let c = &fib.counts;
            writeln!(
                f,
                "{} sampled fibres; overall {} nontrigonal, {} trigonal, {} anomalous, {} errors",
                fib.samples, c.nontrigonal, c.trigonal, c.anomalous, c.errors
            )?;
            for r in fib.sampled.iter().filter(|r| r.verdict != Verdict::Nontrigonal.name()) {
                writeln!(f, "{:<24} {:>8} {:>7} {:>9}  {}", r.point, opt(&r.quadrics), opt(&r.cubics), opt(&r.coker_mu), r.verdict)?;
            }
            for p in &fib.probes {
                writeln!(f, "smoothness probe at {}: {}", p.point, p.outcome)?;
            }
            if let Some(n) = &fib.probe_note {
                writeln!(f, "smoothness probe skipped: {}", n)?;
            }
        }
        if let Some(h) = &self.horikawa {
            writeln!(f)?;
            match &h.error {
                Some(e) => writeln!(f, "horikawa    error: {}", e)?,
                None => {
                    if let Some(s) = &h.f {
                        writeln!(f, "F           {}", sheaf_line(s))?;
                    }
                    let hs: Vec<String> = h
                        .horikawa_numbers
                        .iter()
                        .map(|n| format!("{}: {}", n.place, opt(&n.value)))
                        .collect();
                    writeln!(f, "H           {{{}}}  sum {}", hs.join(", "), opt(&h.horikawa_sum))?;
                    for d in &h.degrees {
                        writeln!(f, "deg R_{}     {} (expected {})", d.k, d.glued, d.expected)?;
                    }
                }
            }
        }
        if let Some(k) = &self.koszul {
            match &k.error {
                Some(e) => writeln!(f, "koszul      error: {}", e)?,
                None => {
                    if let (Some(a), Some(b)) = (&k.k03, &k.k12) {
                        writeln!(f, "K_03        {}", sheaf_line(a))?;
                        writeln!(f, "K_12        {}  ({})", sheaf_line(b), if k.k12_matches_f == Some(true) { "same as F" } else { "differs from F" })?;
                    }
                }
            }
        }
        if let Some(s) = &self.slope {
            writeln!(f)?;
            for i in &s.identities {
                writeln!(f, "{}: {} {} {}", i.name, i.lhs, if i.holds { "=" } else { "!=" }, i.rhs)?;
            }
        }
        if let Some(g) = &self.grading {
            writeln!(f)?;
            writeln!(f, "{}", g.text)?;
        }
        if let Some(t) = &self.timing {
            writeln!(f)?;
            for s in t {
                writeln!(f, "{:<12} {} ms", s.stage, s.milliseconds)?;
            }
        }
        writeln!(f)?;
        for e in &self.failures {
            writeln!(f, "failed: {}", e)?;
        }
        write!(f, "{}", self.verdict)
    }
}
