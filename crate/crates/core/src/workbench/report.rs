use crate::error::Result;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::fmt::Write;

/// Output encoding of a [`Report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Thresholds in force while producing a report.
#[derive(Debug, Clone, Serialize)]
pub struct TolerancePolicy {
    /// Relative singular-value cut; `null` means `max(m, n) · ε`.
    pub rank_rel_tol: Option<f64>,
    pub validation: f64,
    pub obstruction_prune_rel: f64,
    pub base_tol: f64,
    /// Printed polynomial coefficients at or below this magnitude are omitted.
    pub print_floor: f64,
}

/// Rows for the `table` and `csv` encodings.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: &str, header: &[&str]) -> Self {
        Self {
            title: title.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub input: String,
    pub input_digest: String,
    pub tolerance: TolerancePolicy,
    pub results: Value,
    pub diagnostics: Value,
    #[serde(skip)]
    pub tables: Vec<Table>,
}

/// Hex SHA-256 over the concatenated parts.
pub fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p);
    }
    h.finalize().iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

impl Report {
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                Ok(s)
            }
            Format::Table => Ok(self.render_table()),
            Format::Csv => self.render_csv(),
        }
    }

    fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} (sha256 {})", self.command, self.input, &self.input_digest[..16]);
        for t in &self.tables {
            let _ = writeln!(out, "\n{}", t.title);
            let cols = t.header.len().max(t.rows.iter().map(Vec::len).max().unwrap_or(0));
            let mut width = vec![0usize; cols];
            for row in std::iter::once(&t.header).chain(&t.rows) {
                for (c, cell) in row.iter().enumerate() {
                    width[c] = width[c].max(cell.chars().count());
                }
            }
            for row in std::iter::once(&t.header).chain(&t.rows) {
                let line: Vec<String> = row
                    .iter()
                    .enumerate()
                    .map(|(c, cell)| format!("{cell}{}", " ".repeat(width[c] - cell.chars().count())))
                    .collect();
                let _ = writeln!(out, "{}", line.join("  ").trim_end());
            }
        }
        out
    }

    fn render_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        let io = |e: csv::Error| crate::error::Error::Io(std::io::Error::other(e));
        for t in &self.tables {
            let header = std::iter::once("section").chain(t.header.iter().map(String::as_str));
            w.write_record(header).map_err(io)?;
            for row in &t.rows {
                w.write_record(std::iter::once(t.title.as_str()).chain(row.iter().map(String::as_str)))
                    .map_err(io)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| crate::error::Error::Io(std::io::Error::other(e.to_string())))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// `re+imi` with shortest round-trip digits.
pub fn fmt_complex(c: crate::C64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else {
        format!("{}{}{}i", c.re, if c.im < 0.0 { "-" } else { "+" }, c.im.abs())
    }
}
