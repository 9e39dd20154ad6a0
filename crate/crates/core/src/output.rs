//! CSV and JSON writers shared by the command line.
//!
//! Floats are written with 17 significant digits so that reruns are
//! byte-identical and values round-trip exactly.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::C64;

/// `x` with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    // normalize −0 so that zero fields print uniformly
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

/// Real and imaginary parts as two CSV cells.
pub fn fmt_c64(z: C64) -> [String; 2] {
    [fmt_f64(z.re), fmt_f64(z.im)]
}

/// Column names `<name>_re,<name>_im`.
pub fn complex_header(name: &str) -> [String; 2] {
    [format!("{name}_re"), format!("{name}_im")]
}

/// Accumulates rows and writes a headed CSV file.
#[derive(Debug, Clone, Default)]
pub struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width differs from header");
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        fs::write(path, self.render())
    }
}

/// SHA-256 of the canonical (key-sorted, compact) JSON form of `config`.
pub fn config_hash<T: Serialize>(config: &T) -> String {
    let value = serde_json::to_value(config).expect("configs serialize");
    let bytes = serde_json::to_vec(&value).expect("values serialize");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes `{"report": kind, "config_hash": …, "config": …, "result": …}`.
pub fn write_report<C: Serialize, R: Serialize>(path: &Path, kind: &str, config: &C, result: &R) -> std::io::Result<()> {
    let doc = json!({
        "report": kind,
        "config_hash": config_hash(config),
        "config": serde_json::to_value(config).map_err(std::io::Error::other)?,
        "result": serde_json::to_value(result).map_err(std::io::Error::other)?,
    });
    let mut f = fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut f, &doc).map_err(std::io::Error::other)?;
    f.write_all(b"\n")
}

/// Reads a JSON file into a value, for hashing or inspection.
pub fn read_json(path: &Path) -> std::io::Result<Value> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(std::io::Error::other)
}
