use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::Value;
use trigon::model_file;
use trigon::REPORT_SCHEMA;
use trigon_core::pfaffian::{family_a, random_quadrics};
use trigon_core::FieldMode;

fn trigon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trigon"))
        .args(args)
        .env_remove("TRIGON_PRIME")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn assert_valid(report: &Value) {
    let schema: Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(report).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{:#?}", errors);
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

const CONSTANT_FAMILY: &str = "\
label = constant trigonal family
field = prime 2147483647
weights = 0 0 0 0 0
m01 = 0
m02 = x0
m03 = x2
m04 = x3
m12 = x1
m13 = x3
m14 = x4
m23 = x0^2 + x1*x2 - x3*x4
m24 = x1^2 - 2*x0*x4 + x2*x3
m34 = x2^2 + x0*x3 + 3*x1*x4
";

#[test]
fn verify_family_a_passes() {
    let o = trigon(&["verify", "--family", "A", "--n", "1", "--seed", "0", "--samples", "5", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = json(&o);
    assert_valid(&r);
    assert_eq!(r["verdict"], "PASS");
    let inv = &r["invariants"];
    assert_eq!((inv["p_g"].as_i64(), inv["chi_f"].as_i64(), inv["k2"].as_i64()), (Some(5), Some(10), Some(41)));
    let h = &r["horikawa"]["horikawa_numbers"];
    assert_eq!(h.as_array().unwrap().len(), 1);
    assert_eq!(h[0]["place"], "(1:0)");
    assert_eq!(h[0]["value"], 1);
}

#[test]
fn invariants_family_a_two() {
    let o = trigon(&["invariants", "--family", "a", "--n", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_valid(&r);
    let inv = &r["invariants"];
    assert_eq!((inv["p_g"].as_i64(), inv["chi_f"].as_i64(), inv["k2"].as_i64()), (Some(15), Some(20), Some(82)));
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let out = out.to_str().unwrap();
    let args = ["verify", "--family", "A", "--n", "1", "--seed", "3", "--samples", "4", "--json", "--output", out];
    let first = trigon(&args);
    let file = std::fs::read(out).unwrap();
    let second = trigon(&args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, file);
    let table = ["fibers", "--family", "A", "--n", "2", "--samples", "3"];
    assert_eq!(trigon(&table).stdout, trigon(&table).stdout);
}

#[test]
fn every_command_validates() {
    let runs: [&[&str]; 5] = [
        &["fibers", "--family", "A", "--n", "1", "--samples", "3", "--rational", "--json"],
        &["horikawa", "--family", "A", "--n", "2", "--json"],
        &["grading", "--family", "B", "--a", "1", "--json"],
        &["grading", "--family", "C", "--d", "2", "--json"],
        &["verify", "--family", "A", "--n", "1", "--samples", "2", "--timing", "--json"],
    ];
    for args in runs {
        let o = trigon(args);
        assert_eq!(o.status.code(), Some(0), "{:?}: {}", args, stderr(&o));
        assert_valid(&json(&o));
    }
}

#[test]
fn regraded_family_b_reports_the_p_g_mismatch() {
    let o = trigon(&["invariants", "--family", "B", "--a", "1", "--forced-grading", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let r = json(&o);
    assert_valid(&r);
    assert_eq!(r["invariants"]["claimed_p_g"]["matches"], false);
    assert_eq!(r["failures"][0], format!("p_g is {}, the family states 7", r["invariants"]["p_g"]));
}

#[test]
fn moved_trigonal_fibre_is_found_and_classified() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&trigon(&["model", "--family", "A", "--n", "1"])).replace("m01 = t1\n", "m01 = t1 - t0\n");
    let path = write(dir.path(), "moved.model", &text);
    let o = trigon(&["verify", "--model", &path, "--samples", "3", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r = json(&o);
    assert_valid(&r);
    assert_eq!(r["horikawa"]["horikawa_numbers"][0]["place"], "(1:1)");
    let special = r["fibers"]["special"].as_array().unwrap();
    let moved = special.iter().find(|row| row["point"] == "(1:1)").expect("support point classified");
    assert_eq!(moved["verdict"], "trigonal");
    assert_eq!(special[0]["verdict"], "nontrigonal");
}

#[test]
fn rational_fibres_skip_the_probe() {
    let r = json(&trigon(&["fibers", "--family", "A", "--n", "1", "--samples", "2", "--rational", "--json"]));
    assert!(r["fibers"]["probes"].as_array().unwrap().is_empty());
    assert!(r["fibers"]["probe_note"].is_string());
    assert_eq!(r["model"]["field"], "rational");
}

#[test]
fn failing_model_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "constant.model", CONSTANT_FAMILY);
    let o = trigon(&["horikawa", "--model", &path, "--json"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let r = json(&o);
    assert_valid(&r);
    assert_eq!(r["verdict"], "FAIL");
    assert!(r["horikawa"]["error"].is_string());
    assert!(!r["failures"].as_array().unwrap().is_empty());
}

#[test]
fn inhomogeneous_model_file_exits_two_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let text = CONSTANT_FAMILY.replace("m01 = 0", "m01 = t1").replace("m23 = x0^2", "m23 = t0*x0^2");
    let path = write(dir.path(), "bad.model", &text);
    let o = trigon(&["fibers", "--model", &path]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    let err = stderr(&o);
    assert!(err.contains("not bihomogeneous"), "{}", err);
    assert!(err.contains("M23: (0,2), (1,2)  INHOMOGENEOUS"), "{}", err);
    assert!(err.contains("verdict: inhomogeneous"), "{}", err);
}

#[test]
fn configuration_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "good.model", CONSTANT_FAMILY);
    let broken = write(dir.path(), "broken.model", "field = rational\nweights = 0 0 0 0 0\nm01 = t1 +\n");
    let cases: [&[&str]; 7] = [
        &["verify"],
        &["verify", "--family", "A"],
        &["verify", "--family", "B", "--n", "1"],
        &["verify", "--family", "A", "--n", "1", "--prime", "100"],
        &["verify", "--model", &path, "--prime", "101"],
        &["verify", "--model", "/nonexistent/file.model"],
        &["verify", "--model", &broken],
    ];
    for args in cases {
        let o = trigon(args);
        assert_eq!(o.status.code(), Some(2), "{:?}", args);
        assert!(!stderr(&o).is_empty());
    }
    let o = trigon(&["verify", "--model", &broken]);
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    let o = trigon(&["verify", "--family", "B", "--a", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("M23 has (1,2) but the other entries force (0,2)"), "{}", stderr(&o));
}

#[test]
fn prime_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_trigon"))
        .args(["model", "--family", "A", "--n", "1"])
        .env("TRIGON_PRIME", "2147483629")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("field = prime 2147483629\n"));
    let o = Command::new(env!("CARGO_BIN_EXE_trigon"))
        .args(["model", "--family", "A", "--n", "1", "--prime", "2147483587"])
        .env("TRIGON_PRIME", "2147483629")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("field = prime 2147483587\n"));
    let o = Command::new(env!("CARGO_BIN_EXE_trigon"))
        .args(["model", "--family", "A", "--n", "1"])
        .env("TRIGON_PRIME", "abc")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn model_file_round_trip_through_the_binary() {
    let dir = tempfile::tempdir().unwrap();
    let o = trigon(&["model", "--family", "A", "--n", "2", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let path = write(dir.path(), "a2.model", &text);
    assert_eq!(stdout(&trigon(&["model", "--model", &path])), text);

    let from_file = json(&trigon(&["invariants", "--model", &path, "--json"]));
    let from_family = json(&trigon(&["invariants", "--family", "A", "--n", "2", "--seed", "7", "--json"]));
    assert_eq!(from_file["model"]["entries"], from_family["model"]["entries"]);
    assert_eq!(from_file["seed"], 7);
    for key in ["p_g", "chi_f", "k2", "chi_rk"] {
        assert_eq!(from_file["invariants"][key], from_family["invariants"][key]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn model_files_round_trip(n in 1u32..4, seed in 0u64..1000, rational in any::<bool>()) {
        let mode = if rational { FieldMode::Rational } else { FieldMode::default_prime() };
        let m = family_a(n, random_quadrics(seed, mode)).unwrap().with_seed(seed);
        let text = model_file::write(&m, mode);
        let back = model_file::read(&text).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(model_file::write(&back, mode), text);
    }
}
