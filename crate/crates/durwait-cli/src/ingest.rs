//! CSV ingestion. Two schemas:
//!   - `timestamp` (durations mode): event times, seconds since epoch
//!   - `timestamp,price` (first-passage mode): a tick series
//! Timestamps must be non-decreasing; prices must be finite.

use crate::error::{PipelineError, Result};
use std::path::Path;

#[derive(Debug, Clone, Default)]
pub struct TickSeries {
    pub timestamps: Vec<f64>,
    pub prices: Vec<f64>,
}

fn check_order(timestamps: &[f64]) -> Result<()> {
    for (i, w) in timestamps.windows(2).enumerate() {
        if w[1] < w[0] {
            // file rows: header is row 1, so data index i+1 sits at row i+3
            return Err(PipelineError::data(format!(
                "timestamps decrease at row {} ({} after {})",
                i + 3,
                w[1],
                w[0]
            )));
        }
    }
    Ok(())
}

/// Reader that tolerates `#` description lines, so `simulate` output feeds
/// straight back into `analyze`.
fn open(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .from_path(path)
        .map_err(|e| PipelineError::data(format!("{}: {e}", path.display())))
}

pub fn read_timestamps(path: &Path) -> Result<Vec<f64>> {
    let mut rdr = open(path)?;
    let headers = rdr
        .headers()
        .map_err(|e| PipelineError::data(format!("{}: {e}", path.display())))?;
    let col = headers
        .iter()
        .position(|h| h.trim() == "timestamp")
        .ok_or_else(|| {
            PipelineError::data(format!("{}: missing `timestamp` column", path.display()))
        })?;
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| PipelineError::data(format!("row {}: {e}", i + 2)))?;
        let raw = rec.get(col).unwrap_or("").trim();
        let t: f64 = raw
            .parse()
            .map_err(|_| PipelineError::data(format!("row {}: bad timestamp {raw:?}", i + 2)))?;
        if !t.is_finite() {
            return Err(PipelineError::data(format!(
                "row {}: non-finite timestamp",
                i + 2
            )));
        }
        out.push(t);
    }
    if out.is_empty() {
        return Err(PipelineError::data(format!(
            "{}: no data rows",
            path.display()
        )));
    }
    check_order(&out)?;
    Ok(out)
}

pub fn read_tick_series(path: &Path) -> Result<TickSeries> {
    let mut rdr = open(path)?;
    let headers = rdr
        .headers()
        .map_err(|e| PipelineError::data(format!("{}: {e}", path.display())))?;
    let find = |name: &str| headers.iter().position(|h| h.trim() == name);
    let tcol = find("timestamp").ok_or_else(|| {
        PipelineError::data(format!("{}: missing `timestamp` column", path.display()))
    })?;
    let pcol = find("price").ok_or_else(|| {
        PipelineError::data(format!("{}: missing `price` column", path.display()))
    })?;
    let mut series = TickSeries::default();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| PipelineError::data(format!("row {}: {e}", i + 2)))?;
        let parse = |c: usize, what: &str| -> Result<f64> {
            let raw = rec.get(c).unwrap_or("").trim();
            let v: f64 = raw.parse().map_err(|_| {
                PipelineError::data(format!("row {}: bad {what} {raw:?}", i + 2))
            })?;
            if !v.is_finite() {
                return Err(PipelineError::data(format!(
                    "row {}: non-finite {what}",
                    i + 2
                )));
            }
            Ok(v)
        };
        series.timestamps.push(parse(tcol, "timestamp")?);
        series.prices.push(parse(pcol, "price")?);
    }
    if series.timestamps.is_empty() {
        return Err(PipelineError::data(format!(
            "{}: no data rows",
            path.display()
        )));
    }
    check_order(&series.timestamps)?;
    Ok(series)
}
