//! Plain CSV: one header line, numbers as `{:.16e}`.

use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

pub(super) struct Table {
    header: Vec<String>,
    body: String,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Table { header, body: String::new() }
    }

    /// Leading integer columns, then floats.
    pub fn row(&mut self, ints: &[usize], values: &[f64]) {
        let mut cells: Vec<String> = ints.iter().map(|i| i.to_string()).collect();
        cells.extend(values.iter().map(|v| format!("{v:.16e}")));
        let _ = writeln!(self.body, "{}", cells.join(","));
    }

    pub fn labelled_row(&mut self, label: &str, values: &[f64]) {
        let mut cells = vec![label.to_string()];
        cells.extend(values.iter().map(|v| format!("{v:.16e}")));
        let _ = writeln!(self.body, "{}", cells.join(","));
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, format!("{}\n{}", self.header.join(","), self.body))?;
        Ok(())
    }
}

/// Reads the float columns named in `columns` from a CSV written by [`Table`].
pub(super) fn read_columns(path: &Path, columns: &[&str]) -> Result<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap_or("").split(',').collect();
    let idx = columns
        .iter()
        .map(|c| {
            header
                .iter()
                .position(|h| h == c)
                .ok_or_else(|| Error::InvalidConfig(format!("{}: no column {c}", path.display())))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = vec![Vec::new(); columns.len()];
    for (line_no, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        for (k, &i) in idx.iter().enumerate() {
            let v = cells.get(i).and_then(|s| s.parse::<f64>().ok()).ok_or_else(|| {
                Error::InvalidConfig(format!("{}: bad value in row {}", path.display(), line_no + 2))
            })?;
            out[k].push(v);
        }
    }
    Ok(out)
}
