//! The JSON report written to stdout.

use std::fmt::Display;

use anchorhom::complex::ComplexKind;
use anchorhom::euler::EulerReport;
use anchorhom::graph::GraphFile;
use anchorhom::homology::HomologyResult;
use anchorhom::Error;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    /// Arguments after the program name, as given.
    pub command: Vec<String>,
    pub params: Params,
    pub results: Results,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<Skipped>,
    pub passed: bool,
    pub wall_time_ms: u64,
}

impl RunReport {
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Params {
    Homology {
        k: usize,
        n: usize,
        q: usize,
        /// 1-based vertex labels.
        support: Vec<usize>,
        budget: u64,
    },
    Euler {
        source: EulerSource,
        n: usize,
        q: usize,
        method: MethodChoice,
        budget: u64,
    },
    Verify {
        kmax: usize,
        nmax: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        budget: Option<u64>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EulerSource {
    Cycle { k: usize },
    Graph { path: String, graph: GraphFile },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    Formula,
    Brute,
    Both,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Results {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub euler: Vec<EulerReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homology: Option<HomologyRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cases: Vec<CaseSummary>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyRecord {
    pub kind: ComplexKind,
    /// 1-based vertex labels of `P`.
    pub support: Vec<usize>,
    /// `rank C_d` for `d = 0..=n`.
    pub ranks: Vec<usize>,
    pub homology: HomologyResult,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl Check {
    pub fn equal<T: PartialEq + Display>(name: impl Into<String>, expected: T, actual: T) -> Self {
        Check {
            name: name.into(),
            pass: expected == actual,
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skipped {
    pub case: String,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseSummary {
    pub case: String,
    pub status: Status,
    pub checks: usize,
    pub failed: usize,
}

/// Printed instead of a report when a command cannot run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub command: Vec<String>,
    pub error: ErrorBody,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io { path: String, source: std::io::Error },
    Usage(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => match e {
                Error::InvalidParameter(_) => "invalid_parameter",
                Error::Hypothesis(_) => "hypothesis",
                Error::Resource { .. } => "resource",
                Error::State(_) => "state",
                Error::Integrity(_) => "integrity",
                Error::Parse(_) => "parse",
            },
            CliError::Io { .. } => "io",
            CliError::Usage(_) => "usage",
        }
    }

    pub fn body(&self) -> ErrorBody {
        ErrorBody {
            kind: self.kind().to_string(),
            message: self.to_string(),
        }
    }
}

impl Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => e.fmt(f),
            CliError::Io { path, source } => write!(f, "{path}: {source}"),
            CliError::Usage(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}
