use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use lcs_core::verify::Status;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// A rectangular view of a result for CSV output.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

pub struct Output {
    pub status: Status,
    pub result: Value,
    pub table: Option<Table>,
    /// Shown as a comment line in CSV output.
    pub note: Option<String>,
}

pub struct RunInfo<'a> {
    pub command: &'a str,
    pub config: Value,
    pub workers: usize,
    pub started: SystemTime,
    pub wall_clock_secs: f64,
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    core_version: &'static str,
    command: &'a str,
    config: &'a Value,
    workers: usize,
    started_unix_secs: f64,
    wall_clock_secs: f64,
    status: Status,
    result: &'a Value,
}

fn unix_secs(t: SystemTime) -> f64 {
    t.duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64())
}

pub fn render(out: &Output, info: &RunInfo, format: Format) -> Result<Vec<u8>, String> {
    match format {
        Format::Json => {
            let env = Envelope {
                tool: "lcs-lab",
                version: env!("CARGO_PKG_VERSION"),
                core_version: lcs_core::VERSION,
                command: info.command,
                config: &info.config,
                workers: info.workers,
                started_unix_secs: unix_secs(info.started),
                wall_clock_secs: info.wall_clock_secs,
                status: out.status,
                result: &out.result,
            };
            let mut bytes = serde_json::to_vec_pretty(&env).map_err(|e| e.to_string())?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        Format::Csv => {
            let mut bytes = Vec::new();
            let meta = format!(
                "# tool=lcs-lab version={} core_version={} command={} workers={} status={}\n\
                 # started_unix_secs={} wall_clock_secs={}\n# config={}\n",
                env!("CARGO_PKG_VERSION"),
                lcs_core::VERSION,
                info.command,
                info.workers,
                out.status.label().to_lowercase(),
                unix_secs(info.started),
                info.wall_clock_secs,
                info.config
            );
            bytes.extend_from_slice(meta.as_bytes());
            if let Some(note) = &out.note {
                bytes.extend_from_slice(format!("# {note}\n").as_bytes());
            }
            if let Some(table) = &out.table {
                let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
                w.write_record(&table.header).map_err(|e| e.to_string())?;
                for row in &table.rows {
                    w.write_record(row).map_err(|e| e.to_string())?;
                }
                bytes.extend(w.into_inner().map_err(|e| e.to_string())?);
            }
            Ok(bytes)
        }
    }
}

pub fn emit(bytes: &[u8], path: Option<&Path>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(bytes)?;
            so.flush()
        }
    }
}
