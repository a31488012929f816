//! Library half of the `gaplab` command-line tool: run configuration, the
//! subcommands, and their CSV / key-value output.
//!
//! Every subcommand renders into a byte buffer first, so output is identical
//! regardless of thread count and nothing is written when a command fails.

pub mod commands;
pub mod format;

use std::path::PathBuf;

use gaplab::{DatasetError, EngineError, HeuristicError};
use thiserror::Error;

pub use commands::run;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Io { .. } => 4,
        }
    }
}

impl From<DatasetError> for CliError {
    fn from(e: DatasetError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<HeuristicError> for CliError {
    fn from(e: HeuristicError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Table1,
    Table2,
    Records,
    FirstGaps,
    Verify,
    Constants,
    Predict,
    Figure1,
    Figure2,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Table1 => "table1",
            Subcommand::Table2 => "table2",
            Subcommand::Records => "records",
            Subcommand::FirstGaps => "first-gaps",
            Subcommand::Verify => "verify",
            Subcommand::Constants => "constants",
            Subcommand::Predict => "predict",
            Subcommand::Figure1 => "figure1",
            Subcommand::Figure2 => "figure2",
        }
    }

    fn default_limit(self) -> u64 {
        match self {
            Subcommand::Table1 => 114,
            Subcommand::Table2 => 250,
            _ => 1_000_000,
        }
    }
}

/// Where G(x) comes from when predicting R(x) in `figure1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GSource {
    #[default]
    Model,
    Empirical,
}

/// A reference table argument: a file, or the copy compiled into the binary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefSource {
    Bundled,
    File(PathBuf),
}

impl RefSource {
    pub fn parse(s: &str) -> Self {
        if s == "bundled" {
            RefSource::Bundled
        } else {
            RefSource::File(PathBuf::from(s))
        }
    }

    fn label(&self) -> String {
        match self {
            RefSource::Bundled => "bundled".into(),
            RefSource::File(p) => p.display().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    limit: Option<u64>,
    pub top_k: usize,
    /// Model name: a gap model for the figures, a predictor for `predict`.
    pub model: Option<String>,
    pub g_source: GSource,
    pub reference: Option<RefSource>,
    pub output: Option<PathBuf>,
    pub gnuplot: Option<PathBuf>,
    pub prime_limit: Option<u64>,
    /// `predict` arguments: x and optionally π(x).
    pub x: Option<f64>,
    pub pi_x: Option<f64>,
    pub segment_length: usize,
    pub threads: usize,
}

impl RunConfig {
    pub fn new(subcommand: Subcommand) -> Self {
        Self {
            subcommand,
            limit: None,
            top_k: 10,
            model: None,
            g_source: GSource::Model,
            reference: None,
            output: None,
            gnuplot: None,
            prime_limit: None,
            x: None,
            pi_x: None,
            segment_length: gaplab::sieve::DEFAULT_SEGMENT_LEN,
            threads: 1,
        }
    }

    pub fn with_limit(mut self, limit: u64) -> Self {
        self.limit = Some(limit);
        self
    }

    pub fn set_limit(&mut self, limit: Option<u64>) {
        self.limit = limit;
    }

    pub fn limit(&self) -> u64 {
        self.limit.unwrap_or(self.subcommand.default_limit())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.limit() < 3 {
            return Err(CliError::Usage(format!("--limit must be at least 3, got {}", self.limit())));
        }
        if self.top_k == 0 {
            return Err(CliError::Usage("--top must be at least 1".into()));
        }
        if self.threads == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        if self.gnuplot.is_some()
            && !matches!(self.subcommand, Subcommand::Figure1 | Subcommand::Figure2)
        {
            return Err(CliError::Usage("--emit-gnuplot only applies to figure1 and figure2".into()));
        }
        Ok(())
    }
}
