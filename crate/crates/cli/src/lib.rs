//! Model files, run configuration and reports for the `trigon` command.

pub mod config;
pub mod model_file;
pub mod report;
pub mod run;

/// The JSON schema of [`report::Report`].
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");
