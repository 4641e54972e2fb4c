//! Scenario-driven command line front end for `mdwave`.
//!
//! A scenario is a TOML file naming one experiment and its parameters. Running it
//! writes `summary.json` plus CSV artifacts and maps the outcome to an exit code.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod experiments;
pub mod report;
pub mod scenario;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use experiments::{run_experiment, RunError};
use scenario::{Scenario, ScenarioError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_BLOW_UP: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Precondition(String),
    BlowUp(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => EXIT_PARSE,
            CliError::Precondition(_) => EXIT_PRECONDITION,
            CliError::BlowUp(_) => EXIT_BLOW_UP,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Precondition(m) => write!(f, "precondition error: {m}"),
            CliError::BlowUp(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Parse(m) => CliError::Parse(m),
            ScenarioError::Precondition(m) => CliError::Precondition(m),
        }
    }
}

impl From<RunError> for CliError {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Scenario(s) => s.into(),
            RunError::Solver(e @ mdwave::Error::BlowUp { .. }) => CliError::BlowUp(e.to_string()),
            RunError::Solver(e) => CliError::Precondition(e.to_string()),
        }
    }
}

/// Scenario text from a bundled name or a file path.
pub fn load_scenario(source: &str) -> Result<Scenario, CliError> {
    let text = match catalog::bundled(source) {
        Some(t) => t.to_string(),
        None => fs::read_to_string(source).map_err(|e| CliError::Io(format!("{source}: {e}")))?,
    };
    Ok(Scenario::parse(&text)?)
}

/// Completed run: the summary document and the files written.
#[derive(Debug)]
pub struct Execution {
    pub pass: bool,
    pub json: String,
    pub out_dir: PathBuf,
}

/// Runs `scenario`, optionally overriding its seed, and writes the outputs.
pub fn execute(mut scenario: Scenario, seed: Option<u64>, out: Option<&Path>) -> Result<Execution, CliError> {
    if let Some(s) = seed {
        scenario.run.seed = s;
    }
    let summary = run_experiment(&scenario)?;
    let json = summary.to_json(&scenario.name, scenario.experiment.tag(), scenario.run.seed);
    let out_dir = match (out, &scenario.output_dir) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(d)) => PathBuf::from(d),
        (None, None) => Path::new("out").join(&scenario.name),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", out_dir.display()));
    fs::create_dir_all(&out_dir).map_err(io)?;
    fs::write(out_dir.join("summary.json"), &json).map_err(io)?;
    for (name, content) in &summary.artifacts {
        fs::write(out_dir.join(name), content).map_err(io)?;
    }
    Ok(Execution { pass: summary.pass(), json, out_dir })
}

/// Exit code for a finished run: check failures only count when `check` is set.
pub fn exit_code(run: &Result<Execution, CliError>, check: bool) -> i32 {
    match run {
        Ok(e) if check && !e.pass => EXIT_CHECK_FAILED,
        Ok(_) => EXIT_OK,
        Err(e) => e.exit_code(),
    }
}
