//! Tab-separated plot-data emission. Every table starts with comment lines
//! naming what it is, then a column-header row; numbers carry 12
//! significant digits.

use crate::error::Result;
use crate::format::sig12;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub fn write_table(
    out_dir: &Path,
    name: &str,
    description: &str,
    columns: &[&str],
    rows: &[Vec<f64>],
) -> Result<PathBuf> {
    fs::create_dir_all(out_dir)?;
    let path = out_dir.join(name);
    let mut f = fs::File::create(&path)?;
    writeln!(f, "# {description}")?;
    writeln!(f, "{}", columns.join("\t"))?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| sig12(v)).collect();
        writeln!(f, "{}", cells.join("\t"))?;
    }
    Ok(path)
}

/// Log-spaced grid including both endpoints.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

/// Linear grid including both endpoints.
pub fn lin_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}
