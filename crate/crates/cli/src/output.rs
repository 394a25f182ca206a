//! CSV / JSON emission with fixed 17-significant-digit formatting.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// One value of one metric for one receiver at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveRecord {
    pub receiver: String,
    pub point: BTreeMap<String, f64>,
    pub metric: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ci_low: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ci_high: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl CurveRecord {
    pub fn new(receiver: &str, point: &[(&str, f64)], metric: &str, value: f64) -> Self {
        Self {
            receiver: receiver.to_string(),
            point: point.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            metric: metric.to_string(),
            value,
            ci_low: None,
            ci_high: None,
            label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }
}

/// `{:.16e}`, i.e. 17 significant digits.
pub fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn sci_opt(v: Option<f64>) -> String {
    v.map(sci).unwrap_or_default()
}

/// Rows of string cells under a header.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Opens `path` for writing, or stdout when `None`.
pub fn open_output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| CliError::Io {
                path: p.to_path_buf(),
                message: e.to_string(),
            })?;
            Ok(Box::new(BufWriter::new(file)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

pub fn write_csv(table: &Table, out: impl Write) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize + ?Sized>(value: &T, mut out: impl Write) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

/// Writes `table` as CSV or `records` as JSON.
pub fn emit(format: Format, table: &Table, records: &[CurveRecord], path: Option<&Path>) -> CliResult<()> {
    let out = open_output(path)?;
    match format {
        Format::Csv => write_csv(table, out),
        Format::Json => write_json(records, out),
    }
}
