//! Error types shared by all numerical operations.

use alloc::string::String;
use core::fmt;

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, CoreError>;

/// Failure modes of the numerical operations.
#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// An argument violated a precondition (non-positive scale, out-of-range
    /// probability, ...).
    Domain(String),
    /// A series or quadrature did not reach the requested tolerance.
    /// `achieved` is the error estimate actually reached.
    Numerical { what: String, achieved: f64 },
    /// The power-law tail is too heavy for the requested statistic.
    /// `raw` carries the raw formula value anyway (it may be negative);
    /// the waiting-time curve for heavy-tailed fits needs it.
    HeavyTail { gamma: f64, raw: f64 },
    /// A regression had too few usable points.
    Fit(String),
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::Domain(msg) => write!(f, "domain error: {msg}"),
            CoreError::Numerical { what, achieved } => {
                write!(f, "numerical error: {what} (achieved {achieved:e})")
            }
            CoreError::HeavyTail { gamma, raw } => write!(
                f,
                "heavy-tail error: gamma = {gamma} <= 3, formula denominator \
                 (gamma - 3) is not safely positive; raw formula value {raw}"
            ),
            CoreError::Fit(msg) => write!(f, "fit error: {msg}"),
        }
    }
}

impl core::error::Error for CoreError {}
