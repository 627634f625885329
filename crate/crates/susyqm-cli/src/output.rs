//! Result files, run manifest and emission.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::{CliResult, Format};

#[derive(Debug, Clone, PartialEq)]
pub struct OutFile {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl OutFile {
    pub fn json<T: Serialize>(name: &str, value: &T) -> CliResult<Self> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        Ok(OutFile {
            name: name.to_string(),
            bytes,
        })
    }

    pub fn csv<T: Serialize>(name: &str, rows: &[T]) -> CliResult<Self> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            w.serialize(r)?;
        }
        let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
        Ok(OutFile {
            name: name.to_string(),
            bytes,
        })
    }
}

/// One printed-form/authoritative discrepancy or resolution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerEntry {
    pub context: String,
    pub form: String,
    pub authoritative: Option<f64>,
    pub printed: Option<f64>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub exit_code: i32,
    pub summary: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub tool_version: String,
    pub tolerances: BTreeMap<String, f64>,
    pub timestamp: String,
    pub outcome: Outcome,
    pub files: Vec<String>,
    pub ledger: Vec<LedgerEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub files: Vec<OutFile>,
    pub manifest: RunManifest,
}

impl RunOutcome {
    pub fn new(
        command: &str,
        parameters: Value,
        tolerances: BTreeMap<String, f64>,
        files: Vec<OutFile>,
        exit_code: i32,
        summary: String,
        ledger: Vec<LedgerEntry>,
    ) -> Self {
        RunOutcome {
            manifest: RunManifest {
                command: command.to_string(),
                parameters,
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                tolerances,
                timestamp: String::new(),
                outcome: Outcome { exit_code, summary },
                files: files.iter().map(|f| f.name.clone()).collect(),
                ledger,
            },
            files,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.manifest.outcome.exit_code
    }

    /// With a directory: every file plus manifest.json. Without: the
    /// files with the requested extension (all if none match) to stdout,
    /// the manifest to stderr.
    pub fn emit(&self, out: Option<&Path>, format: Format) -> CliResult<()> {
        let manifest = OutFile::json("manifest.json", &self.manifest)?;
        match out {
            Some(dir) => {
                fs::create_dir_all(dir)?;
                for f in self.files.iter().chain(std::iter::once(&manifest)) {
                    fs::write(dir.join(&f.name), &f.bytes)?;
                }
            }
            None => {
                let ext = match format {
                    Format::Json => ".json",
                    Format::Csv => ".csv",
                };
                let mut picked: Vec<&OutFile> = self.files.iter().filter(|f| f.name.ends_with(ext)).collect();
                if picked.is_empty() {
                    picked = self.files.iter().collect();
                }
                let mut stdout = std::io::stdout().lock();
                for f in picked {
                    stdout.write_all(&f.bytes)?;
                }
                std::io::stderr().lock().write_all(&manifest.bytes)?;
            }
        }
        Ok(())
    }
}
