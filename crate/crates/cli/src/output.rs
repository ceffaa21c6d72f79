//! Tabular artifacts and the run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use dicke_core::diagnostics::PhaseSpaceGrid;
use dicke_core::export::{csv_string, write_text};
use dicke_core::spectra::SpectrumTable;
use dicke_core::{Error, Result};
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Numeric table with named columns, rendered as CSV or JSON.
#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => {
                let header: Vec<&str> = self.columns.iter().map(String::as_str).collect();
                Ok(csv_string(&header, &self.rows, None))
            }
            Format::Json => to_json(self),
        }
    }

    pub fn from_spectrum(table: &SpectrumTable) -> Self {
        let mut columns = vec!["lambda".to_string()];
        columns.extend((1..=table.k()).map(|i| format!("E{i}")));
        let rows = table
            .lambda_grid
            .iter()
            .zip(&table.levels)
            .map(|(&l, levels)| std::iter::once(l).chain(levels.iter().copied()).collect())
            .collect();
        Self { columns, rows }
    }

    /// Long form, X outer and P inner, as in the library's own grid export.
    pub fn from_grid(grid: &PhaseSpaceGrid) -> Self {
        let mut rows = Vec::with_capacity(grid.x_values.len() * grid.p_values.len());
        for (i, &x) in grid.x_values.iter().enumerate() {
            for (j, &p) in grid.p_values.iter().enumerate() {
                rows.push(vec![x, p, grid.values[i][j]]);
            }
        }
        Self { columns: vec!["X".into(), "P".into(), "value".into()], rows }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::InvalidState(format!("serialization: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Collects the files of one run under `dir/<stem>_<quantity>.<ext>`.
pub struct ArtifactWriter {
    pub dir: PathBuf,
    pub stem: String,
    pub format: Format,
    pub written: Vec<String>,
}

impl ArtifactWriter {
    pub fn new(dir: &Path, stem: &str, format: Format) -> Self {
        Self { dir: dir.to_path_buf(), stem: stem.to_string(), format, written: Vec::new() }
    }

    pub fn table(&mut self, quantity: &str, table: &Table) -> Result<()> {
        let name = format!("{}_{quantity}.{}", self.stem, self.format.extension());
        self.text(&name, &table.render(self.format)?)
    }

    /// Write a file with a fixed name (relative to the output directory).
    pub fn text(&mut self, name: &str, contents: &str) -> Result<()> {
        write_text(&self.dir.join(name), contents)?;
        self.written.push(name.to_string());
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Inputs {
    pub delta: f64,
    pub epsilon: f64,
    pub w0: f64,
    pub theta: f64,
    pub lambda_grid: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Truncation {
    pub n_max: usize,
    pub certified: bool,
    pub rel_tol: f64,
}

/// One entry of `manifest.json`.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub task: String,
    pub inputs: Inputs,
    pub truncation: Truncation,
    pub degeneracy_tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degeneracies_at_first_coupling: Option<Vec<usize>>,
    pub format: Format,
    pub files: Vec<String>,
    pub versions: BTreeMap<String, String>,
    pub wall_time_seconds: f64,
}

pub fn versions() -> BTreeMap<String, String> {
    let mut v = BTreeMap::new();
    v.insert("dicke".to_string(), env!("CARGO_PKG_VERSION").to_string());
    v.insert("dicke-core".to_string(), dicke_core::VERSION.to_string());
    v
}

pub const MANIFEST: &str = "manifest.json";

/// Insert `record` under `name` into `dir/manifest.json`, keeping the
/// entries of earlier runs that wrote to the same directory.
pub fn update_manifest(dir: &Path, name: &str, record: &RunRecord) -> Result<()> {
    let path = dir.join(MANIFEST);
    let mut runs = match fs::read_to_string(&path) {
        Ok(text) => match serde_json::from_str::<Value>(&text) {
            Ok(Value::Object(mut root)) => match root.remove("runs") {
                Some(Value::Object(runs)) => runs,
                _ => serde_json::Map::new(),
            },
            _ => serde_json::Map::new(),
        },
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => serde_json::Map::new(),
        Err(e) => return Err(e.into()),
    };
    let entry = serde_json::to_value(record).map_err(|e| Error::InvalidState(format!("serialization: {e}")))?;
    runs.insert(name.to_string(), entry);
    let mut root = serde_json::Map::new();
    root.insert("runs".into(), Value::Object(runs));
    write_text(&path, &to_json(&Value::Object(root))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_rendering() {
        let t = Table { columns: vec!["lambda".into(), "S".into()], rows: vec![vec![0.0, -0.0], vec![0.5, 1.25]] };
        assert_eq!(
            t.render(Format::Csv).unwrap(),
            "lambda,S\n0.00000000000e0,0.00000000000e0\n5.00000000000e-1,1.25000000000e0\n"
        );
        let v: Value = serde_json::from_str(&t.render(Format::Json).unwrap()).unwrap();
        assert_eq!(v["columns"][1], "S");
        assert_eq!(v["rows"][1][1], 1.25);
    }

    #[test]
    fn manifest_keeps_other_runs() {
        let dir = tempfile::tempdir().unwrap();
        let record = |files: Vec<String>| RunRecord {
            command: "run".into(),
            task: "spectrum".into(),
            inputs: Inputs { delta: 1.0, epsilon: 0.0, w0: 1.0, theta: 0.0, lambda_grid: vec![0.0], k: Some(2) },
            truncation: Truncation { n_max: 10, certified: true, rel_tol: 1e-8 },
            degeneracy_tolerance: 1e-6,
            degeneracies_at_first_coupling: None,
            format: Format::Csv,
            files,
            versions: versions(),
            wall_time_seconds: 0.1,
        };
        update_manifest(dir.path(), "a", &record(vec!["a.csv".into()])).unwrap();
        update_manifest(dir.path(), "b", &record(vec!["b.csv".into()])).unwrap();
        update_manifest(dir.path(), "a", &record(vec!["a2.csv".into()])).unwrap();
        let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join(MANIFEST)).unwrap()).unwrap();
        assert_eq!(v["runs"]["a"]["files"][0], "a2.csv");
        assert_eq!(v["runs"]["b"]["truncation"]["n_max"], 10);
    }
}
