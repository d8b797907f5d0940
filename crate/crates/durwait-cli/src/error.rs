//! Pipeline error type with the CLI's exit-code contract.

use durwait_core::CoreError;
use std::fmt;

#[derive(Debug)]
pub enum PipelineError {
    /// Bad or missing input data (exit code 2).
    Data(String),
    /// A computation failed to converge or left its valid domain (exit 3).
    Numerical(String),
    /// Tail exponent gamma <= 3 encountered in strict mode (exit 4).
    HeavyTail { gamma: f64, raw: f64 },
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Data(_) => 2,
            PipelineError::Numerical(_) => 3,
            PipelineError::HeavyTail { .. } => 4,
        }
    }

    pub fn data(msg: impl Into<String>) -> Self {
        PipelineError::Data(msg.into())
    }

    /// Tag the error with the pipeline stage that produced it.
    pub fn in_stage(self, stage: &str) -> Self {
        match self {
            PipelineError::Data(m) => PipelineError::Data(format!("[{stage}] {m}")),
            PipelineError::Numerical(m) => PipelineError::Numerical(format!("[{stage}] {m}")),
            e @ PipelineError::HeavyTail { .. } => e,
        }
    }
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipelineError::Data(m) => write!(f, "data error: {m}"),
            PipelineError::Numerical(m) => write!(f, "numerical error: {m}"),
            PipelineError::HeavyTail { gamma, raw } => write!(
                f,
                "heavy-tail refusal: gamma = {gamma} <= 3; raw formula value {raw} is not a \
                 valid waiting time"
            ),
        }
    }
}

impl std::error::Error for PipelineError {}

impl From<CoreError> for PipelineError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Numerical { what, achieved } => {
                PipelineError::Numerical(format!("{what} (achieved {achieved:e})"))
            }
            CoreError::HeavyTail { gamma, raw } => PipelineError::HeavyTail { gamma, raw },
            CoreError::Domain(m) => PipelineError::Data(m),
            CoreError::Fit(m) => PipelineError::Data(m),
        }
    }
}

impl From<std::io::Error> for PipelineError {
    fn from(e: std::io::Error) -> Self {
        PipelineError::Data(format!("io: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, PipelineError>;
