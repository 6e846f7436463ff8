//! In-memory CSV table with `#` metadata lines, and its gnuplot `.dat` form.

use crate::CliError;
use std::fs;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub meta: Vec<String>,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Shortest round-trip scientific form; `NaN` for failed entries.
pub fn num(v: f64) -> String {
    format!("{v:e}")
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), ..Default::default() }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut out = String::new();
        for m in &self.meta {
            out.push_str("# ");
            out.push_str(m);
            out.push('\n');
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        out.push_str(&String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))?);
        Ok(out)
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), CliError> {
        fs::write(path, self.to_csv()?).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }

    pub fn read_csv(path: &Path) -> Result<Table, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Table::parse_csv(&text)
    }

    pub fn parse_csv(text: &str) -> Result<Table, CliError> {
        let meta = text
            .lines()
            .take_while(|l| l.starts_with('#'))
            .map(|l| l.trim_start_matches('#').trim().to_string())
            .collect();
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let headers = r.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(rec?.iter().map(str::to_string).collect());
        }
        Ok(Table { meta, headers, rows })
    }

    /// Row groups keyed by every column left of `x` plus `variant`, in
    /// order of first appearance.
    pub fn series(&self, x: usize) -> Vec<(String, Vec<&Vec<String>>)> {
        let mut keys: Vec<usize> = (0..x).collect();
        if let Some(v) = self.column("variant") {
            if v > x {
                keys.push(v);
            }
        }
        let mut out: Vec<(String, Vec<&Vec<String>>)> = Vec::new();
        for row in &self.rows {
            let label = keys
                .iter()
                .map(|&k| if self.headers[k] == "variant" { row[k].clone() } else { format!("{}={}", self.headers[k], row[k]) })
                .collect::<Vec<_>>()
                .join(" ");
            match out.iter_mut().find(|(l, _)| *l == label) {
                Some((_, rows)) => rows.push(row),
                None => out.push((label, vec![row])),
            }
        }
        out
    }

    /// Gnuplot data: one block per series separated by two blank lines,
    /// numeric columns from `x` onwards.
    pub fn to_dat(&self, x: &str) -> Result<String, CliError> {
        let xi = self.column(x).ok_or_else(|| CliError::MissingColumn(x.to_string()))?;
        let cols: Vec<usize> =
            (xi..self.headers.len()).filter(|&c| !matches!(self.headers[c].as_str(), "variant" | "status")).collect();
        let mut out = String::new();
        for m in &self.meta {
            out.push_str(&format!("# {m}\n"));
        }
        out.push_str(&format!("# {}\n", cols.iter().map(|&c| self.headers[c].as_str()).collect::<Vec<_>>().join(" ")));
        for (i, (label, rows)) in self.series(xi).into_iter().enumerate() {
            if i > 0 {
                out.push_str("\n\n");
            }
            out.push_str(&format!("# series {label}\n"));
            for row in rows {
                out.push_str(&cols.iter().map(|&c| row[c].as_str()).collect::<Vec<_>>().join(" "));
                out.push('\n');
            }
        }
        Ok(out)
    }
}
