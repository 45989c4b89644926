//! Deterministic CSV and JSON emission.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use otto_core::bath::PairRecord;
use serde::Serialize;

use crate::config::RunConfig;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Shortest round-trip decimal; switches to exponent form for very large or
/// small magnitudes.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// A CSV cell.
pub enum Cell {
    F(f64),
    U(u64),
    B(bool),
    S(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::U(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::U(x as u64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::B(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::S(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::S(x)
    }
}

pub struct Table {
    columns: Vec<&'static str>,
    body: String,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            body: String::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        assert_eq!(cells.len(), self.columns.len(), "row width");
        let line: Vec<String> = cells
            .into_iter()
            .map(|c| match c {
                Cell::F(x) => fmt_f64(x),
                Cell::U(x) => x.to_string(),
                Cell::B(x) => x.to_string(),
                Cell::S(x) => x,
            })
            .collect();
        self.body.push_str(&line.join(","));
        self.body.push('\n');
    }

    pub fn render(&self, command: &str, run: &RunConfig) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# command: {command}");
        let _ = writeln!(out, "# version: {VERSION}");
        let _ = writeln!(out, "# config_hash: {}", run.hash());
        let _ = writeln!(out, "# seed: {}", run.seed);
        out.push_str(&self.columns.join(","));
        out.push('\n');
        out.push_str(&self.body);
        out
    }
}

#[derive(Serialize)]
pub struct RunRecord<'a, T: Serialize> {
    pub command: &'a str,
    pub version: &'a str,
    pub config_hash: String,
    pub seed: u64,
    pub config: &'a RunConfig,
    pub pairs: Vec<PairRecord>,
    pub result: T,
}

pub struct Sink {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Sink {
    pub fn new(dir: &Path) -> anyhow::Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> anyhow::Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        self.written.push(path);
        Ok(())
    }

    pub fn csv(&mut self, name: &str, command: &str, run: &RunConfig, table: &Table) -> anyhow::Result<()> {
        self.write(name, &table.render(command, run))
    }

    pub fn json<T: Serialize>(&mut self, name: &str, record: &T) -> anyhow::Result<()> {
        let mut text = serde_json::to_string_pretty(record)?;
        text.push('\n');
        self.write(name, &text)
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 6.02e23, -2.5, 0.0] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(0.1), "0.1");
        assert_eq!(fmt_f64(f64::NAN), "NaN");
    }
}
