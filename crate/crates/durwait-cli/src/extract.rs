//! Duration extraction: inter-event differences and threshold first
//! passages over a tick series.

use crate::error::{PipelineError, Result};
use crate::ingest::TickSeries;

#[derive(Debug, Clone)]
pub struct DurationSample {
    pub durations: Vec<f64>,
    /// Count of zero durations (simultaneous events), retained in the data.
    pub zero_count: usize,
}

/// Successive differences of an ordered event-time sequence.
pub fn extract_durations(timestamps: &[f64]) -> Result<DurationSample> {
    if timestamps.len() < 2 {
        return Err(PipelineError::data(format!(
            "need at least 2 timestamps for durations, got {}",
            timestamps.len()
        )));
    }
    let mut durations = Vec::with_capacity(timestamps.len() - 1);
    let mut zero_count = 0;
    for (i, w) in timestamps.windows(2).enumerate() {
        let d = w[1] - w[0];
        if d < 0.0 {
            return Err(PipelineError::data(format!(
                "timestamps decrease at row {}",
                i + 2
            )));
        }
        if d == 0.0 {
            zero_count += 1;
        }
        durations.push(d);
    }
    Ok(DurationSample {
        durations,
        zero_count,
    })
}

/// What the reference price becomes after a passage event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResetRule {
    /// Reference jumps to the actual traded price at the event.
    AtEventPrice,
    /// Reference moves by whole threshold steps toward the price
    /// (overshoot beyond the step is kept against the next passage).
    AtThresholdLevel,
}

#[derive(Debug, Clone)]
pub struct FirstPassage {
    pub durations: DurationSample,
    /// The recorded rate series: one row per passage event.
    pub filtered: TickSeries,
}

/// Emit an event whenever the price has moved by at least `threshold` from
/// the current reference; ties at exactly the threshold count as events.
pub fn extract_first_passage(
    series: &TickSeries,
    threshold: f64,
    reset: ResetRule,
) -> Result<FirstPassage> {
    if !(threshold > 0.0) {
        return Err(PipelineError::data(format!(
            "threshold must be > 0, got {threshold}"
        )));
    }
    if series.timestamps.is_empty() {
        return Err(PipelineError::data("empty tick series"));
    }
    let mut reference = series.prices[0];
    let mut last_event_time = series.timestamps[0];
    let mut filtered = TickSeries::default();
    let mut durations = Vec::new();
    let mut zero_count = 0;
    for i in 1..series.prices.len() {
        let p = series.prices[i];
        let move_size = p - reference;
        if move_size.abs() + 1e-12 * threshold >= threshold {
            let t = series.timestamps[i];
            let d = t - last_event_time;
            if d == 0.0 {
                zero_count += 1;
            }
            durations.push(d);
            filtered.timestamps.push(t);
            filtered.prices.push(p);
            reference = match reset {
                ResetRule::AtEventPrice => p,
                ResetRule::AtThresholdLevel => {
                    let steps = (move_size.abs() / threshold).floor();
                    reference + move_size.signum() * steps * threshold
                }
            };
            last_event_time = t;
        }
    }
    Ok(FirstPassage {
        durations: DurationSample {
            durations,
            zero_count,
        },
        filtered,
    })
}
