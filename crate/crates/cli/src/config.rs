//! Command-line arguments and their validation into a [`RunConfig`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;
use trigon_core::grading::grading_search;
use trigon_core::pfaffian::{family_a, Family, ModelError, PfaffianModel};
use trigon_core::scalar::{ScalarError, DEFAULT_PRIME};
use trigon_core::FieldMode;

use crate::model_file::{self, ModelFileError};

/// Environment variable holding the default prime.
pub const PRIME_ENV: &str = "TRIGON_PRIME";

#[derive(Debug, Parser)]
#[command(name = "trigon", version, about = "Invariants, special fibres and Horikawa numbers of genus-5 Pfaffian fibrations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariants from the Pfaffian resolution.
    Invariants(RunArgs),
    /// Classify the fibres at (1:0), (0:1) and seeded random points.
    Fibers(RunArgs),
    /// The sheaf F, the Koszul sheaves and the degrees of R_1, R_2, R_3.
    Horikawa(RunArgs),
    /// Everything above, with the slope identities.
    Verify(RunArgs),
    /// Check the stated scroll grading of a builtin family.
    Grading(GradingArgs),
    /// Print the model file of a builtin family.
    Model(SourceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    A,
    B,
    C,
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Model file.
    #[arg(long, value_name = "PATH")]
    pub model: Option<PathBuf>,
    /// Builtin family.
    #[arg(long, value_enum, ignore_case = true)]
    pub family: Option<FamilyName>,
    /// Parameter of family A.
    #[arg(long)]
    pub n: Option<u32>,
    /// Parameter of family B.
    #[arg(long)]
    pub a: Option<u32>,
    /// Parameter of family C.
    #[arg(long)]
    pub d: Option<u32>,
    /// Seed for the quadrics of a builtin family.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Work over the prime field of this order.
    #[arg(long, conflicts_with = "rational")]
    pub prime: Option<u64>,
    /// Work over the rationals.
    #[arg(long)]
    pub rational: bool,
    /// Give the quadrics the bidegrees forced by the fixed entries instead of
    /// the stated ones.
    #[arg(long)]
    pub forced_grading: bool,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Number of random fibres to classify.
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    /// Number of sampled fibres to run the smoothness probe on.
    #[arg(long, default_value_t = 2)]
    pub probes: usize,
    /// Write the JSON report here.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Print the JSON report instead of the table.
    #[arg(long)]
    pub json: bool,
    /// Record wall-clock times; the report is then no longer reproducible.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct GradingArgs {
    #[arg(long, value_enum, ignore_case = true)]
    pub family: FamilyName,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub a: Option<u32>,
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest weight tried for each coordinate.
    #[arg(long)]
    pub box_max: Option<i64>,
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("give exactly one of --model and --family")]
    ModelSource,
    #[error("family {family} takes --{expected}")]
    Parameter { family: char, expected: char },
    #[error("--{0} is only meaningful for a builtin family")]
    FamilyOnly(&'static str),
    #[error("the field of a model file is set in the file")]
    FieldWithModel,
    #[error("{PRIME_ENV}={0} is not an integer")]
    PrimeEnv(String),
    #[error(transparent)]
    Prime(#[from] ScalarError),
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    ModelFile {
        path: PathBuf,
        source: ModelFileError,
    },
    #[error("{0}")]
    Model(#[from] ModelError),
}

impl ConfigError {
    /// Extra lines for the terminal, e.g. the per-entry degree table.
    pub fn details(&self) -> Option<String> {
        match self {
            ConfigError::Model(ModelError::Inhomogeneous(r))
            | ConfigError::ModelFile {
                source: ModelFileError::Model(ModelError::Inhomogeneous(r)),
                ..
            } => Some(r.to_string()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelSource {
    File(PathBuf),
    Family {
        family: Family,
        seed: u64,
        forced_grading: bool,
    },
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub source: ModelSource,
    pub mode: FieldMode,
    pub samples: usize,
    pub probes: usize,
    pub output: Option<PathBuf>,
    pub json: bool,
    pub timing: bool,
}

/// `--prime`, `--rational`, then `TRIGON_PRIME`, then the built-in default.
pub fn field_mode(prime: Option<u64>, rational: bool, env: Option<&str>) -> Result<FieldMode, ConfigError> {
    if rational {
        return Ok(FieldMode::Rational);
    }
    let p = match (prime, env) {
        (Some(p), _) => p,
        (None, Some(v)) => v
            .trim()
            .parse()
            .map_err(|_| ConfigError::PrimeEnv(v.to_string()))?,
        (None, None) => DEFAULT_PRIME,
    };
    Ok(FieldMode::prime(p)?)
}

pub fn family(name: FamilyName, n: Option<u32>, a: Option<u32>, d: Option<u32>) -> Result<Family, ConfigError> {
    let wrong = |family, expected| ConfigError::Parameter { family, expected };
    match name {
        FamilyName::A => match (n, a, d) {
            (Some(n), None, None) => Ok(Family::A { n }),
            _ => Err(wrong('A', 'n')),
        },
        FamilyName::B => match (n, a, d) {
            (None, Some(a), None) => Ok(Family::B { a }),
            _ => Err(wrong('B', 'a')),
        },
        FamilyName::C => match (n, a, d) {
            (None, None, Some(d)) => Ok(Family::C { d }),
            _ => Err(wrong('C', 'd')),
        },
    }
}

impl SourceArgs {
    pub fn resolve(&self, env_prime: Option<&str>) -> Result<(ModelSource, FieldMode), ConfigError> {
        match (&self.model, self.family) {
            (Some(path), None) => {
                if self.n.is_some() || self.a.is_some() || self.d.is_some() {
                    return Err(ConfigError::FamilyOnly("n/--a/--d"));
                }
                if self.forced_grading {
                    return Err(ConfigError::FamilyOnly("forced-grading"));
                }
                if self.prime.is_some() || self.rational {
                    return Err(ConfigError::FieldWithModel);
                }
                // the mode is read from the file when the model is loaded
                Ok((ModelSource::File(path.clone()), FieldMode::Rational))
            }
            (None, Some(name)) => {
                let family = family(name, self.n, self.a, self.d)?;
                let mode = field_mode(self.prime, self.rational, env_prime)?;
                Ok((
                    ModelSource::Family {
                        family,
                        seed: self.seed,
                        forced_grading: self.forced_grading,
                    },
                    mode,
                ))
            }
            _ => Err(ConfigError::ModelSource),
        }
    }
}

impl RunConfig {
    pub fn from_args(args: &RunArgs, env_prime: Option<&str>) -> Result<Self, ConfigError> {
        let (source, mode) = args.source.resolve(env_prime)?;
        Ok(RunConfig {
            source,
            mode,
            samples: args.samples,
            probes: args.probes,
            output: args.output.clone(),
            json: args.json,
            timing: args.timing,
        })
    }

    /// Build or read the model; for a file, also fixes `self.mode`.
    pub fn load_model(&mut self) -> Result<PfaffianModel, ConfigError> {
        let model = match &self.source {
            ModelSource::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
                    path: path.clone(),
                    source,
                })?;
                let m = model_file::read(&text).map_err(|source| ConfigError::ModelFile {
                    path: path.clone(),
                    source,
                })?;
                let report = m.homogeneity();
                if !report.homogeneous {
                    return Err(ConfigError::ModelFile {
                        path: path.clone(),
                        source: ModelFileError::Model(ModelError::Inhomogeneous(Box::new(report))),
                    });
                }
                if let Some(mode) = m.mode() {
                    self.mode = mode;
                }
                m
            }
            ModelSource::Family {
                family,
                seed,
                forced_grading,
            } => build_family(*family, *seed, *forced_grading, self.mode)?,
        };
        Ok(model)
    }
}

/// A builtin family with seeded quadrics.
pub fn build_family(family: Family, seed: u64, forced_grading: bool, mode: FieldMode) -> Result<PfaffianModel, ModelError> {
    family.validate()?;
    let model = if forced_grading {
        let box_max = trigon_core::grading::default_box(family);
        grading_search(family, seed, box_max).corrected_model(seed, mode)?
    } else {
        let degrees = family.stated_q_bidegrees();
        let qs = family.random_qs(seed, mode, &family.weights(), degrees);
        match family {
            Family::A { n } => family_a(n, qs)?,
            _ => family.build(qs)?,
        }
    };
    Ok(model.with_seed(seed))
}
