//! Command-line companion to `durwait-core`: CSV ingestion, first-passage
//! extraction, Monte Carlo renewal simulation, and report/table emission.

pub mod analyze;
pub mod cli;
pub mod error;
pub mod extract;
pub mod format;
pub mod ingest;
pub mod mc;
pub mod report;
pub mod tables;
