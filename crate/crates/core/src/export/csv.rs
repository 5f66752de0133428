//! CSV tables. LF line endings, `.` decimal separator, and every float in
//! its shortest exactly-round-tripping decimal form (never more than 17
//! significant digits).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::corrint::{CorrIntegralGrid, DistanceMatrix};
use crate::dimension::DimensionEstimate;
use crate::embedding::EmbeddedSeries;
use crate::error::{Error, Result};
use crate::stats::{KernelComparison, PairedResult, ScanRow};

pub(crate) fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Quote a text field when it would otherwise break the row.
fn field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn format_grid_csv(grid: &CorrIntegralGrid) -> String {
    let mut out = String::from("m,r,c\n");
    for (m, row) in grid.m_values.iter().zip(&grid.c) {
        for (r, c) in grid.r_values.iter().zip(row) {
            writeln!(out, "{m},{r},{c}").unwrap();
        }
    }
    out
}

pub fn write_grid_csv(grid: &CorrIntegralGrid, path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), format_grid_csv(grid).as_bytes())
}

/// `m,r,c` rows read back into table form.
#[derive(Debug, Clone, PartialEq)]
pub struct GridTable {
    pub m_values: Vec<usize>,
    pub r_values: Vec<f64>,
    pub c: Vec<Vec<f64>>,
}

/// Parse a grid written by [`write_grid_csv`]. Rows must be grouped by `m`
/// and every `m` must list the same thresholds in the same order.
pub fn read_grid_csv(path: impl AsRef<Path>) -> Result<GridTable> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_grid_csv(&text).map_err(|e| match e {
        Error::MalformedInput(msg) => Error::MalformedInput(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn parse_grid_csv(text: &str) -> Result<GridTable> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == "m,r,c" => {}
        _ => return Err(Error::MalformedInput("expected header `m,r,c`".into())),
    }

    let mut m_values: Vec<usize> = Vec::new();
    let mut c: Vec<Vec<f64>> = Vec::new();
    let mut rows_r: Vec<Vec<f64>> = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let bad = || Error::MalformedInput(format!("line {}: cannot parse {line:?}", idx + 1));
        let mut parts = line.split(',');
        let (Some(m), Some(r), Some(cv), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
            return Err(bad());
        };
        let m: usize = m.trim().parse().map_err(|_| bad())?;
        let r: f64 = r.trim().parse().map_err(|_| bad())?;
        let cv: f64 = cv.trim().parse().map_err(|_| bad())?;
        if m_values.last() != Some(&m) {
            if m_values.contains(&m) {
                return Err(Error::MalformedInput(format!(
                    "line {}: rows for m = {m} are not contiguous",
                    idx + 1
                )));
            }
            m_values.push(m);
            c.push(Vec::new());
            rows_r.push(Vec::new());
        }
        c.last_mut().unwrap().push(cv);
        rows_r.last_mut().unwrap().push(r);
    }

    let r_values = rows_r.first().cloned().unwrap_or_default();
    if r_values.is_empty() {
        return Err(Error::MalformedInput("grid has no rows".into()));
    }
    if let Some(k) = rows_r.iter().position(|row| row != &r_values) {
        return Err(Error::MalformedInput(format!(
            "m = {} uses a different threshold list",
            m_values[k]
        )));
    }
    Ok(GridTable { m_values, r_values, c })
}

pub fn format_estimates_csv(estimates: &[DimensionEstimate]) -> String {
    let mut out = String::from("m,slope,intercept,r_squared,r_lo,r_hi,n_points\n");
    for e in estimates {
        let f = &e.fit;
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            e.m, f.slope, f.intercept, f.r_squared, f.region.r_lo, f.region.r_hi, f.n_points
        )
        .unwrap();
    }
    out
}

pub fn format_pairs_csv(pairs: &[PairedResult]) -> String {
    let mut out = String::from("pair_id,c_a,c_b,diff\n");
    for p in pairs {
        writeln!(out, "{},{},{},{}", field(&p.pair_id), p.c_a, p.c_b, p.difference).unwrap();
    }
    out
}

pub fn format_summary_csv(comparisons: &[KernelComparison]) -> String {
    let mut out = String::from("kernel,n,mean_diff,std_err\n");
    for c in comparisons {
        let s = &c.summary;
        writeln!(out, "{},{},{},{}", c.kernel, s.n, s.mean, s.std_err).unwrap();
    }
    out
}

pub fn format_scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from("kernel,r,m,n,mean_diff,std_err\n");
    for row in rows {
        let s = &row.stat;
        writeln!(out, "{},{},{},{},{},{}", row.kernel, row.r, row.m, s.n, s.mean, s.std_err).unwrap();
    }
    out
}

/// One matrix row per line, no header.
pub fn format_matrix_csv(matrix: &DistanceMatrix) -> String {
    let mut out = String::new();
    for i in 0..matrix.n() {
        let row: Vec<String> = matrix.row(i).iter().map(f64::to_string).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// One delay vector per line, header `x0,x1,...`.
pub fn format_vectors_csv(series: &EmbeddedSeries) -> String {
    let header: Vec<String> = (0..series.dim()).map(|k| format!("x{k}")).collect();
    let mut out = header.join(",");
    out.push('\n');
    for v in series.vectors() {
        let row: Vec<String> = v.iter().map(f64::to_string).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn format_taps_csv(taps: &[f64]) -> String {
    let mut out = String::from("tap\n");
    for t in taps {
        writeln!(out, "{t}").unwrap();
    }
    out
}

/// Write any of the `format_*` outputs.
pub fn write_csv(contents: &str, path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), contents.as_bytes())
}
