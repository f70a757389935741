//! Command-line front end for `discval`: ring specifications, one handler per
//! subcommand, and the verification suites behind `disc-val verify`.

pub mod commands;
pub mod spec;
pub mod verify;

use serde_json::Value;

pub use spec::RingSpec;
pub use verify::{run_suite, Suite, VerifyConfig, VerifyReport};

/// A finished command: the JSON document, a human summary and the exit code.
#[derive(Clone, Debug)]
pub struct Output {
    pub json: Value,
    pub summary: String,
    pub exit: i32,
}

impl Output {
    pub fn new(json: Value, summary: String) -> Self {
        Output { json, summary, exit: 0 }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(discval::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

/// Runs a suite and wraps its report.
pub fn verify(cfg: &VerifyConfig) -> Result<Output, CliError> {
    let report = run_suite(cfg)?;
    let summary = format!(
        "{}: {} instances, {} failures, {} skipped",
        report.suite,
        report.instances_run,
        report.failures.len(),
        report.skipped.len()
    );
    let exit = report.exit_code();
    let json = serde_json::to_value(&report).expect("report");
    Ok(Output { json, summary, exit })
}
