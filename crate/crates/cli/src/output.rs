//! CSV tables and the run manifest written next to each of them.

use std::path::{Path, PathBuf};

use serde::Serialize;
use wearout_core::{format_float, Policy};

use crate::error::{CliError, CliResult};

/// An in-memory CSV table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }
}

pub fn float(x: f64) -> String {
    format_float(x)
}

pub fn opt_float(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

pub fn opt_count(x: Option<u64>) -> String {
    x.map(|n| n.to_string()).unwrap_or_default()
}

/// `T`, `N`, `Z` cells; inactive components are empty.
pub fn policy_cells(p: &Policy) -> [String; 3] {
    [opt_float(p.t), opt_count(p.n), opt_float(p.z)]
}

/// Provenance of one output file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub scenario: String,
    pub config_hash: String,
    pub master_seed: u64,
    pub tool_version: String,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: impl Into<String>, scenario: impl Into<String>, config_hash: String, master_seed: u64) -> Self {
        Self {
            command: command.into(),
            scenario: scenario.into(),
            config_hash,
            master_seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }
}

fn write(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Output {
        path: path.to_path_buf(),
        source,
    })
}

/// Write `<out>/<name>.csv` and `<out>/<name>.manifest.json`; returns the CSV path.
pub fn write_table(out: &Path, name: &str, table: &Table, manifest: &RunManifest) -> CliResult<PathBuf> {
    std::fs::create_dir_all(out).map_err(|source| CliError::Output {
        path: out.to_path_buf(),
        source,
    })?;
    let csv_path = out.join(format!("{name}.csv"));
    write(&csv_path, &table.to_csv())?;
    let json = serde_json::to_string_pretty(manifest).expect("manifest serializes") + "\n";
    write(&out.join(format!("{name}.manifest.json")), &json)?;
    Ok(csv_path)
}
