use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use trigon::config::{self, Cli, Command, ConfigError, RunConfig, PRIME_ENV};
use trigon::report::Report;
use trigon::run::{self, Task};
use trigon::model_file;

fn config_error(e: &ConfigError) -> ExitCode {
    eprintln!("error: {}", e);
    if let Some(d) = e.details() {
        eprintln!("{}", d);
    }
    ExitCode::from(2)
}

fn emit(report: &Report, json: bool, output: Option<&std::path::Path>) -> ExitCode {
    let text = report.to_json();
    if let Some(path) = output {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("error: writing {}: {}", path.display(), e);
            return ExitCode::from(2);
        }
    }
    let mut stdout = std::io::stdout().lock();
    let shown = if json { text } else { format!("{}\n", report) };
    let _ = stdout.write_all(shown.as_bytes());
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let env_prime = std::env::var(PRIME_ENV).ok();
    let (task, args) = match cli.command {
        Command::Invariants(a) => (Task::Invariants, a),
        Command::Fibers(a) => (Task::Fibers, a),
        Command::Horikawa(a) => (Task::Horikawa, a),
        Command::Verify(a) => (Task::Verify, a),
        Command::Grading(g) => {
            let family = match config::family(g.family, g.n, g.a, g.d) {
                Ok(f) => f,
                Err(e) => return config_error(&e),
            };
            let box_max = g.box_max.unwrap_or_else(|| trigon_core::grading::default_box(family));
            if !(0..=4).contains(&box_max) {
                eprintln!("error: --box-max must lie in 0..=4");
                return ExitCode::from(2);
            }
            let report = run::run_grading(family, g.seed, box_max);
            return emit(&report, g.json, g.output.as_deref());
        }
        Command::Model(src) => {
            let mut cfg = match src.resolve(env_prime.as_deref()) {
                Ok((source, mode)) => RunConfig {
                    source,
                    mode,
                    samples: 0,
                    probes: 0,
                    output: None,
                    json: false,
                    timing: false,
                },
                Err(e) => return config_error(&e),
            };
            return match cfg.load_model() {
                Ok(m) => {
                    print!("{}", model_file::write(&m, cfg.mode));
                    ExitCode::SUCCESS
                }
                Err(e) => config_error(&e),
            };
        }
    };
    let mut cfg = match RunConfig::from_args(&args, env_prime.as_deref()) {
        Ok(c) => c,
        Err(e) => return config_error(&e),
    };
    let model = match cfg.load_model() {
        Ok(m) => m,
        Err(e) => return config_error(&e),
    };
    let report = run::run(task, &cfg, &model);
    emit(&report, cfg.json, cfg.output.as_deref())
}
