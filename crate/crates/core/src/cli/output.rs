//! Tabular output as CSV (one file per temperature) or a single JSON document.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::{Format, RunConfig};
use crate::error::Result;

/// One block of numeric output for a single temperature.
#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub temperature: f64,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(temperature: f64, columns: &[&'static str]) -> Self {
        Self {
            temperature,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.11e}")).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

#[derive(Serialize)]
struct Document<'a> {
    command: &'a str,
    config: &'a RunConfig,
    tables: &'a [Table],
}

/// File name for one temperature, e.g. `figure2_T0.5.csv`.
pub fn csv_name(command: &str, temperature: f64) -> String {
    format!("{command}_T{temperature}.csv")
}

/// Writes the tables under `config.output.path` and returns the files created.
pub fn write_tables(command: &str, tables: &[Table], config: &RunConfig) -> Result<Vec<PathBuf>> {
    let dir: &Path = &config.output.path;
    fs::create_dir_all(dir)?;
    match config.output.format {
        Format::Csv => tables
            .iter()
            .map(|t| {
                let path = dir.join(csv_name(command, t.temperature));
                fs::write(&path, t.to_csv())?;
                Ok(path)
            })
            .collect(),
        Format::Json => {
            let path = dir.join(format!("{command}.json"));
            let mut f = fs::File::create(&path)?;
            serde_json::to_writer_pretty(&mut f, &Document { command, config, tables })?;
            f.write_all(b"\n")?;
            Ok(vec![path])
        }
    }
}
