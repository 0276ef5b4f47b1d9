//! Human-readable summary of a results CSV.

use std::fmt::Write;

use crate::error::CliError;
use crate::table::{LABEL_COLUMNS, META_COLUMNS};

struct Loaded {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn load(csv_text: &str) -> Result<Loaded, CliError> {
    let mut r = csv::Reader::from_reader(csv_text.as_bytes());
    let columns: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        // the summary row is recomputed, not echoed
        if rec.get(0) == Some("summary") {
            continue;
        }
        rows.push(rec.iter().map(str::to_string).collect());
    }
    if rows.is_empty() {
        return Err(CliError::EmptyTable);
    }
    Ok(Loaded { columns, rows })
}

fn numeric(s: &str) -> Option<f64> {
    match s {
        "true" => Some(1.0),
        "false" => Some(0.0),
        _ => s.parse().ok(),
    }
}

impl Loaded {
    fn col(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of a column if every non-empty cell is numeric.
    fn values(&self, j: usize) -> Option<Vec<f64>> {
        let cells: Vec<&str> = self.rows.iter().map(|r| r[j].as_str()).filter(|s| !s.is_empty()).collect();
        if cells.is_empty() {
            return None;
        }
        cells.into_iter().map(numeric).collect()
    }
}

/// Mean/min/max of every numeric column, then kind-specific lines and the
/// δ–detection curve when present. A one-row table is echoed as is.
pub fn report(csv_text: &str) -> Result<String, CliError> {
    let t = load(csv_text)?;
    let mut out = String::new();
    let w = t.columns.iter().map(String::len).max().unwrap_or(0).max(8);
    if t.rows.len() == 1 {
        writeln!(out, "1 row").unwrap();
        for (c, v) in t.columns.iter().zip(&t.rows[0]) {
            writeln!(out, "{c:<w$}  {v}").unwrap();
        }
        return Ok(out);
    }

    writeln!(out, "{} rows", t.rows.len()).unwrap();
    writeln!(out, "{:<w$}  {:>14}  {:>14}  {:>14}", "column", "mean", "min", "max").unwrap();
    for (j, c) in t.columns.iter().enumerate() {
        if META_COLUMNS.contains(&c.as_str()) || LABEL_COLUMNS.contains(&c.as_str()) {
            continue;
        }
        let Some(v) = t.values(j) else { continue };
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let min = v.iter().copied().fold(f64::INFINITY, f64::min);
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        writeln!(out, "{c:<w$}  {mean:>14.6}  {min:>14.6}  {max:>14.6}").unwrap();
    }

    if let (Some(f), Some(b)) = (t.col("fidelity"), t.col("both_opened")) {
        let mean = |j| {
            let v = t.values(j).unwrap_or_default();
            v.iter().sum::<f64>() / v.len().max(1) as f64
        };
        writeln!(out).unwrap();
        writeln!(out, "mean fidelity                  {:.6}", mean(f)).unwrap();
        writeln!(out, "both-opening acceptance rate   {:.6}", mean(b)).unwrap();
    }
    if let Some(a) = t.col("accepted") {
        let v = t.values(a).unwrap_or_default();
        writeln!(out).unwrap();
        writeln!(out, "verified {} of {}", v.iter().filter(|&&x| x == 1.0).count(), v.len()).unwrap();
    }

    if let (Some(d), Some(p)) = (t.col("delta"), t.col("detection_probability")) {
        let mut curve: Vec<(f64, f64, &str)> = t
            .rows
            .iter()
            .filter_map(|r| Some((numeric(&r[d])?, numeric(&r[p])?, r[1].as_str())))
            .collect();
        // stable: ties keep file order
        curve.sort_by(|a, b| a.0.total_cmp(&b.0));
        writeln!(out).unwrap();
        writeln!(out, "{:>8}  {:>14}  {:>14}", "index", "delta", "detection").unwrap();
        for (delta, det, idx) in curve {
            writeln!(out, "{idx:>8}  {delta:>14.6}  {det:>14.6}").unwrap();
        }
    }
    Ok(out)
}
