//! Versioned report envelope, verdict lines and the CSV summary.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: &str = "spets-report";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Verdict {
    /// Acceptance criterion this line feeds, when produced by `suite`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub criterion: Option<u8>,
    pub config: String,
    pub check: String,
    /// The statement being checked, in words.
    pub statement: String,
    pub pass: bool,
}

/// One configuration's output: its data plus verdicts, or the error that
/// stopped it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Run {
    pub key: String,
    pub command: String,
    pub data: Value,
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<RunError>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RunError {
    /// `config` for rejected input, `evidence` for anything else.
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub version: u32,
    pub command: String,
    pub config: Value,
    pub runs: Vec<Run>,
    pub pass: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("cannot serialise report: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
}

impl Report {
    pub fn new(command: &str, config: Value, runs: Vec<Run>) -> Self {
        let pass = runs.iter().all(|r| r.error.is_none() && r.verdicts.iter().all(|v| v.pass));
        Report { schema: SCHEMA.into(), version: SCHEMA_VERSION, command: command.into(), config, runs, pass }
    }

    pub fn verdicts(&self) -> impl Iterator<Item = &Verdict> {
        self.runs.iter().flat_map(|r| r.verdicts.iter())
    }

    pub fn has_config_error(&self) -> bool {
        self.runs.iter().any(|r| r.error.as_ref().is_some_and(|e| e.kind == "config"))
    }

    pub fn to_json(&self) -> Result<String, OutputError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn write_json(&self, path: &Path) -> Result<(), OutputError> {
        std::fs::write(path, self.to_json()?).map_err(|source| OutputError::Io { path: path.display().to_string(), source })
    }

    /// One row per verdict, plus one row per failed run.
    pub fn write_csv(&self, path: &Path) -> Result<(), OutputError> {
        let file = std::fs::File::create(path).map_err(|source| OutputError::Io { path: path.display().to_string(), source })?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(["criterion", "command", "config", "check", "pass"])?;
        for r in &self.runs {
            for v in &r.verdicts {
                let c = v.criterion.map(|c| c.to_string()).unwrap_or_default();
                w.write_record([c.as_str(), &r.command, &v.config, &v.check, if v.pass { "PASS" } else { "FAIL" }])?;
            }
            if let Some(e) = &r.error {
                w.write_record(["", &r.command, &r.key, &format!("error: {}", e.message), "FAIL"])?;
            }
        }
        w.flush().map_err(|source| OutputError::Io { path: path.display().to_string(), source })?;
        Ok(())
    }

    /// Human summary: one line per verdict and a closing tally.
    pub fn summary(&self, out: &mut impl Write) -> std::io::Result<()> {
        for r in &self.runs {
            for v in &r.verdicts {
                writeln!(out, "{}  {:<28} {:<24} {}", if v.pass { "PASS" } else { "FAIL" }, v.config, v.check, v.statement)?;
            }
            if let Some(e) = &r.error {
                writeln!(out, "FAIL  {:<28} {:<24} {} error: {}", r.key, r.command, e.kind, e.message)?;
            }
        }
        let total = self.verdicts().count();
        let failed = self.verdicts().filter(|v| !v.pass).count();
        let errors = self.runs.iter().filter(|r| r.error.is_some()).count();
        writeln!(out, "{}: {} verdicts, {} failed, {} errors", if self.pass { "PASS" } else { "FAIL" }, total, failed, errors)
    }
}
