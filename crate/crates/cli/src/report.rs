//! Report assembly: numeric tables rendered to CSV with the run's
//! configuration echoed in comment lines, so every data file is
//! self-describing and reruns are byte-comparable.

use std::fs;
use std::path::Path;

use crate::CliResult;

/// One experiment's tabular output plus its provenance echo.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    /// Column names, one per entry of each row.
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    /// Configuration echo written as `# key = value` lines.
    pub echo: Vec<(String, String)>,
    /// Indices of columns holding counts, rendered without an exponent.
    pub integer_columns: Vec<usize>,
}

/// 12 significant digits: enough to compare runs, stable across reruns.
pub fn format_value(value: f64) -> String {
    format!("{value:.11e}")
}

impl RunReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.echo {
            out.push_str(&format!("# {key} = {value}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            debug_assert_eq!(row.len(), self.columns.len());
            let fields: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    if self.integer_columns.contains(&i) {
                        format!("{v:.0}")
                    } else {
                        format_value(v)
                    }
                })
                .collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> CliResult<()> {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                fs::create_dir_all(parent)?;
            }
        }
        fs::write(path, self.to_csv())?;
        Ok(())
    }

    /// The values of one named column, in row order.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let index = self.columns.iter().position(|&c| c == name)?;
        Some(self.rows.iter().map(|row| row[index]).collect())
    }
}
