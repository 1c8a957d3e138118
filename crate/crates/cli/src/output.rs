//! Tables with a reproducibility manifest, written as CSV or JSON.

use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::time::Duration;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Everything needed to rerun the experiment that produced a table.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub seed: u64,
    pub params: Value,
}

impl RunManifest {
    pub fn new(subcommand: &str, seed: u64, params: Value) -> Self {
        RunManifest {
            tool: "besov-orlicz",
            version: env!("CARGO_PKG_VERSION"),
            subcommand: subcommand.to_string(),
            seed,
            params,
        }
    }

    /// SHA-256 of the canonical JSON encoding.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("manifest serialises");
        Sha256::digest(&bytes)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn render(table: &Table, manifest: &RunManifest, format: Format) -> String {
    let digest = manifest.digest();
    match format {
        Format::Csv => {
            let header = json!({ "digest": digest, "manifest": manifest });
            let mut out = format!("# {header}\n{}\n", table.columns.join(","));
            for row in &table.rows {
                let line: Vec<String> = row.iter().map(cell).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let doc = json!({
                "digest": digest,
                "manifest": manifest,
                "columns": table.columns,
                "rows": table.rows,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("table serialises");
            s.push('\n');
            s
        }
    }
}

/// Write the table to `out` (or stdout) and the timed manifest next to it
/// as `<out>.manifest.json` (or to stderr).
pub fn emit(
    table: &Table,
    manifest: &RunManifest,
    format: Format,
    out: Option<&Path>,
    elapsed: Duration,
) -> io::Result<()> {
    let body = render(table, manifest, format);
    let timed = json!({
        "digest": manifest.digest(),
        "manifest": manifest,
        "duration_secs": elapsed.as_secs_f64(),
    });
    match out {
        Some(path) => {
            fs::write(path, body)?;
            let mut side = path.as_os_str().to_owned();
            side.push(".manifest.json");
            fs::write(side, serde_json::to_string_pretty(&timed)? + "\n")
        }
        None => {
            io::stdout().write_all(body.as_bytes())?;
            eprintln!("# run: {timed}");
            Ok(())
        }
    }
}
