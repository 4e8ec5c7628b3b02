//! Deterministic tables and file writing.
//!
//! Floats use Rust's shortest round-trip representation, so equal values
//! always print to equal bytes.

use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::CliError;

pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Comma-separated table with a header row; empty cells stand for "not
/// applicable".
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

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    fn line(cells: &[String]) -> String {
        cells.join(",")
    }

    pub fn render(&self) -> String {
        let mut s = Self::line(&self.header);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&Self::line(r));
            s.push('\n');
        }
        s
    }

    pub fn record_checksums(&self) -> Vec<String> {
        self.rows.iter().map(|r| sha256_hex(Self::line(r).as_bytes())).collect()
    }
}

/// Markdown rendering of the same table.
pub fn markdown_table(t: &Table) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "| {} |", t.header.join(" | "));
    let _ = writeln!(s, "|{}", "---|".repeat(t.header.len()));
    for r in &t.rows {
        let _ = writeln!(s, "| {} |", r.join(" | "));
    }
    s
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), contents)?;
    Ok(())
}
