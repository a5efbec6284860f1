//! Tabular output: CSV (header row, LF, comma) or JSON.
//!
//! Numbers are written in scientific notation with 12 significant digits.

use std::io::{self, Write};

use crate::args::Format;

pub fn fmt_num(x: f64) -> String {
    format!("{x:.11e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    /// Columns `axes..., gamma, coherence`.
    pub fn decoherence<S: Into<String>>(axes: impl IntoIterator<Item = S>) -> Self {
        let mut t = Self::new(axes);
        t.columns.push("gamma".into());
        t.columns.push("coherence".into());
        t
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    /// Appends `gamma` and `exp(-gamma)` to the axis values.
    pub fn push_gamma(&mut self, mut axes: Vec<f64>, gamma: f64) {
        axes.push(gamma);
        axes.push((-gamma).exp());
        self.push(axes);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn write_csv(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| fmt_num(x)).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }

    /// `{"columns": [...], "rows": [[...], ...]}`
    pub fn write_json(&self, w: &mut dyn Write) -> io::Result<()> {
        let names = serde_json::to_string(&self.columns).map_err(io::Error::other)?;
        write!(w, "{{\"columns\":{names},\"rows\":[")?;
        for (i, row) in self.rows.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|&x| fmt_num(x)).collect();
            let sep = if i == 0 { "" } else { "," };
            write!(w, "{sep}[{}]", cells.join(","))?;
        }
        writeln!(w, "]}}")
    }

    pub fn write(&self, format: Format, w: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(w),
            Format::Json => self.write_json(w),
        }
    }
}
