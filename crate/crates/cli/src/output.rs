//! Machine-readable output: a JSON envelope or a flat CSV table.
//!
//! JSON documents carry `tool`, `version`, `schema`, `seed`, the full
//! `config` and a command-specific `result`. CSV files carry only the
//! command's table; its header is fixed for each schema version.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// One CSV cell. Floats use the shortest text that reads back exactly, the
/// same text serde_json produces.
#[derive(Debug, Clone)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Fixed6(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => Value::from(*v).to_string(),
            Cell::Fixed6(v) => format!("{v:.6}"),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

pub struct Report<'a, C: Serialize> {
    pub command: &'a str,
    pub seed: u64,
    pub config: &'a C,
    pub result: Value,
    pub table: Table,
}

impl<C: Serialize> Report<'_, C> {
    pub fn write(&self, path: &Path, format: Format) -> Result<()> {
        let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
        let mut out = BufWriter::new(file);
        match format {
            Format::Json => {
                let doc = json!({
                    "tool": "knockout",
                    "version": env!("CARGO_PKG_VERSION"),
                    "library_version": knockout::VERSION,
                    "schema": format!("knockout.{}.v{SCHEMA_VERSION}", self.command),
                    "command": self.command,
                    "seed": self.seed,
                    "config": self.config,
                    "result": self.result,
                });
                serde_json::to_writer_pretty(&mut out, &doc)?;
                out.write_all(b"\n")?;
            }
            Format::Csv => {
                let mut wtr = csv::Writer::from_writer(&mut out);
                wtr.write_record(&self.table.header)?;
                for row in &self.table.rows {
                    wtr.write_record(row.iter().map(Cell::render))?;
                }
                wtr.flush()?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

