//! Running one command on a loaded model.

use std::time::Instant;

use trigon_core::grading::{default_box, grading_search};
use trigon_core::horikawa::verify_slope;
use trigon_core::pfaffian::{Family, PfaffianModel};
use trigon_core::BasePoint;

use crate::config::{ModelSource, RunConfig};
use crate::report::{self, FibersSection, ModelEcho, Report, SheafEcho, StageTime};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Invariants,
    Fibers,
    Horikawa,
    Verify,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Invariants => "invariants",
            Task::Fibers => "fibers",
            Task::Horikawa => "horikawa",
            Task::Verify => "verify",
        }
    }
}

struct Clock {
    on: bool,
    stages: Vec<StageTime>,
}

impl Clock {
    fn time<T>(&mut self, stage: &'static str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.on {
            self.stages.push(StageTime {
                stage,
                milliseconds: start.elapsed().as_millis(),
            });
        }
        out
    }
}

pub fn run(task: Task, cfg: &RunConfig, model: &PfaffianModel) -> Report {
    let (family, echo_family, path) = match &cfg.source {
        ModelSource::Family {
            family,
            forced_grading,
            ..
        } => (Some(*family), Some(report::family_echo(*family, *forced_grading)), None),
        ModelSource::File(p) => (None, None, Some(p.display().to_string())),
    };
    let seed = match &cfg.source {
        ModelSource::Family { seed, .. } => *seed,
        ModelSource::File(_) => model.seed.unwrap_or(0),
    };
    let mut clock = Clock {
        on: cfg.timing,
        stages: Vec::new(),
    };
    let mut failures = Vec::new();
    let mut out = Report {
        tool: report::TOOL,
        version: report::VERSION,
        command: task.name().to_string(),
        seed,
        model: ModelEcho::new(model, cfg.mode, echo_family, path),
        invariants: None,
        fibers: None,
        horikawa: None,
        koszul: None,
        slope: None,
        grading: None,
        verdict: "PASS",
        failures: Vec::new(),
        timing: None,
    };

    if matches!(task, Task::Invariants | Task::Verify) {
        let inv = clock.time("invariants", || report::invariants_section(model, family, seed));
        if let Some(e) = &inv.error {
            failures.push(format!("invariants: {}", e));
        }
        if let (Some(c), Some(p_g)) = (&inv.claimed_p_g, inv.p_g) {
            if !c.matches {
                failures.push(format!("p_g is {}, the family states {}", p_g, c.value));
            }
        }
        if inv.exactness.failures > 0 {
            failures.push(format!(
                "Pfaffian complex not exact at {} of {} random points",
                inv.exactness.failures, inv.exactness.samples
            ));
        }
        out.invariants = Some(inv);
    }

    let mut support_points: Vec<BasePoint> = Vec::new();
    if matches!(task, Task::Horikawa | Task::Verify) {
        let slope = clock.time("horikawa", || verify_slope(model));
        if let Ok(h) = &slope.horikawa {
            support_points = h.horikawa.support.iter().filter_map(|e| e.place.point().cloned()).collect();
        }
        let h = report::horikawa_section(&slope.horikawa);
        let k = report::koszul_section(&slope.horikawa);
        if let Some(e) = &h.error {
            failures.push(format!("horikawa: {}", e));
        }
        if h.even == Some(false) {
            failures.push("F has a stalk of odd length".to_string());
        }
        if h.degrees.len() < 3 && h.error.is_none() {
            failures.push("degrees of R_k not checked: invariants unavailable".to_string());
        }
        for d in h.degrees.iter().filter(|d| !d.holds) {
            failures.push(format!("deg R_{} is {}, expected {}", d.k, d.glued, d.expected));
        }
        if task == Task::Verify {
            if k.k03.as_ref().is_some_and(|s| s.total_length > 0) {
                failures.push("K_03 is not zero".to_string());
            }
            if k.k12_matches_f == Some(false) {
                failures.push("K_12 and F differ".to_string());
            }
            let s = report::slope_section(&slope);
            if h.error.is_none() && s.identities.is_empty() {
                failures.push("no slope identity could be evaluated".to_string());
            }
            for i in s.identities.iter().filter(|i| !i.holds) {
                failures.push(format!("{}: {} != {}", i.name, i.lhs, i.rhs));
            }
            out.slope = Some(s);
        }
        out.horikawa = Some(h);
        out.koszul = Some(k);
    }

    if matches!(task, Task::Fibers | Task::Verify) {
        let fib = clock.time("fibers", || {
            report::fibers_section(model, cfg.mode, cfg.samples, cfg.probes, seed, &support_points)
        });
        if fib.counts.anomalous > 0 {
            failures.push(format!("fibers: {} anomalous fibres", fib.counts.anomalous));
        }
        if fib.counts.errors > 0 {
            failures.push(format!("fibers: {} fibres could not be classified", fib.counts.errors));
        }
        for p in fib.probes.iter().filter(|p| p.outcome != "pass" && p.outcome != "inconclusive") {
            failures.push(format!("smoothness probe at {}: {}", p.point, p.outcome));
        }
        if let Some(f) = out.horikawa.as_ref().and_then(|h| h.f.as_ref()) {
            support_check(f, &fib, &mut failures);
        }
        out.fibers = Some(fib);
    }

    if task == Task::Verify {
        if let Some(f @ (Family::B { .. } | Family::C { .. })) = family {
            let g = clock.time("grading", || grading_search(f, seed, default_box(f)));
            out.grading = Some(report::grading_section(&g));
        }
    }

    out.verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    out.failures = failures;
    if cfg.timing {
        out.timing = Some(clock.stages);
    }
    out
}

/// The rational points of the support of F must be exactly the fibres
/// classified trigonal.
fn support_check(f: &SheafEcho, fib: &FibersSection, failures: &mut Vec<String>) {
    let rows = || fib.special.iter().chain(&fib.sampled);
    for stalk in f.support.iter().filter(|s| s.degree == 1) {
        match rows().find(|r| r.point == stalk.place) {
            Some(r) if r.verdict == "trigonal" => {}
            Some(r) => failures.push(format!("F is supported at {} but the fibre there is {}", stalk.place, r.verdict)),
            None => failures.push(format!("fibre at {} in the support of F was not classified", stalk.place)),
        }
    }
    for r in rows().filter(|r| r.verdict == "trigonal") {
        if !f.support.iter().any(|s| s.place == r.point) {
            failures.push(format!("fibre at {} is trigonal but F vanishes there", r.point));
        }
    }
}

/// The grading check of a builtin family on its own.
pub fn run_grading(family: Family, seed: u64, box_max: i64) -> Report {
    let g = grading_search(family, seed, box_max);
    let model = family.assemble(
        family.random_qs(seed, trigon_core::FieldMode::Rational, &family.weights(), family.stated_q_bidegrees()),
        family.weights(),
    );
    Report {
        tool: report::TOOL,
        version: report::VERSION,
        command: "grading".to_string(),
        seed,
        model: ModelEcho::new(&model, trigon_core::FieldMode::Rational, Some(report::family_echo(family, false)), None),
        invariants: None,
        fibers: None,
        horikawa: None,
        koszul: None,
        slope: None,
        grading: Some(report::grading_section(&g)),
        verdict: "PASS",
        failures: Vec::new(),
        timing: None,
    }
}
