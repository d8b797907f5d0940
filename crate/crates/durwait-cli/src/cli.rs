//! Command-line front end: argument parsing and subcommand dispatch.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analyze::{analyze_sample, run_analyze, AnalyzeConfig, CrossoverPolicy, Mode, Unit};
use crate::error::{PipelineError, Result};
use crate::extract::{extract_durations, extract_first_passage, DurationSample, ResetRule};
use crate::format::sig12;
use crate::ingest;
use crate::mc::{residual_life_probe, simulate_renewal, DistSpec};
use crate::tables::write_table;

#[derive(Parser, Debug)]
#[command(
    name = "durwait",
    about = "Duration and waiting-time analysis for threshold-crossing event data",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ModeArg {
    Durations,
    Fpt,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum UnitArg {
    S,
    Min,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ResetArg {
    /// Reference resets to the traded price at each event.
    Event,
    /// Reference moves by whole threshold steps (overshoot carried).
    Level,
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Input CSV: `timestamp` column (durations mode) or
    /// `timestamp,price` (fpt mode).
    #[arg(long)]
    input: PathBuf,
    /// What the input rows are: raw event times or a tick series to run
    /// first-passage extraction on.
    #[arg(long, value_enum, default_value = "durations")]
    mode: ModeArg,
    /// First-passage threshold in price units (fpt mode).
    #[arg(long, default_value_t = 0.1)]
    threshold: f64,
    /// Reference-price reset rule after a passage event (fpt mode).
    #[arg(long, value_enum, default_value = "event")]
    reset: ResetArg,
}

impl InputArgs {
    fn durations(&self) -> Result<DurationSample> {
        match self.mode {
            ModeArg::Durations => {
                let ts = ingest::read_timestamps(&self.input)?;
                extract_durations(&ts)
            }
            ModeArg::Fpt => {
                let series = ingest::read_tick_series(&self.input)?;
                Ok(extract_first_passage(&series, self.threshold, self.reset())?.durations)
            }
        }
    }

    fn reset(&self) -> ResetRule {
        match self.reset {
            ResetArg::Event => ResetRule::AtEventPrice,
            ResetArg::Level => ResetRule::AtThresholdLevel,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Extract durations from event times or a tick series.
    Extract {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Fit the Weibull body and the power-law tail exponent.
    Fit {
        #[command(flatten)]
        input: InputArgs,
        /// Upper time limit of the Weibull double-log fit window.
        #[arg(long)]
        t_cut: Option<f64>,
        /// Lower time limit of the tail fit (default: 95th percentile).
        #[arg(long)]
        t_min_tail: Option<f64>,
    },
    /// Full pipeline: extraction, fits, waiting times, Gini, plot tables.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        t_cut: Option<f64>,
        #[arg(long)]
        t_min_tail: Option<f64>,
        /// Crossover policy: `optimal` or `fixed:<seconds>`.
        #[arg(long, default_value = "optimal")]
        t_cross: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        /// Time unit for report values.
        #[arg(long, value_enum, default_value = "s")]
        unit: UnitArg,
        /// Turn the heavy-tail (gamma <= 3) warning into exit code 4.
        #[arg(long)]
        strict: bool,
    },
    /// Simulate a renewal process and write the event times.
    Simulate {
        /// Distribution: `weibull:m,a`, `tailweibull:m,a,gamma,tx`,
        /// or `ml:beta,t0,tmax`.
        #[arg(long)]
        dist: String,
        #[arg(long, default_value_t = 100_000)]
        n_events: usize,
        /// Residual-life probes to run on the simulated times (0 = none).
        #[arg(long, default_value_t = 0)]
        n_probes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Emit plot tables for a parametric distribution without input data.
    Plotdata {
        #[arg(long)]
        dist: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Extract { input, out_dir } => {
            let sample = input.durations()?;
            let rows: Vec<Vec<f64>> = sample.durations.iter().map(|&d| vec![d]).collect();
            let path = write_table(
                &out_dir,
                "durations.tsv",
                "extracted inter-event durations (seconds)",
                &["duration"],
                &rows,
            )?;
            println!("n = {}", sample.durations.len());
            println!("zero_durations = {}", sample.zero_count);
            println!("written = {}", path.display());
            Ok(())
        }
        Command::Fit {
            input,
            t_cut,
            t_min_tail,
        } => {
            let sample = input.durations()?;
            let d = &sample.durations;
            let fit =
                durwait_core::fitting::weibull_paper_fit(d, t_cut.unwrap_or(f64::INFINITY))?;
            println!("fit_m = {}", sig12(fit.m));
            println!("fit_a = {}", sig12(fit.a));
            println!("fit_r_squared = {}", sig12(fit.r_squared));
            println!("fit_n_used = {}", fit.n_used);
            let t_min = t_min_tail.unwrap_or_else(|| {
                let mut s = d.clone();
                s.sort_by(|a, b| a.partial_cmp(b).unwrap());
                s[((s.len() as f64 - 1.0) * 0.95).round() as usize]
            });
            match durwait_core::fitting::tail_exponent_fit(d, t_min) {
                Ok(tf) => {
                    println!("tail_gamma = {}", sig12(tf.gamma));
                    println!("tail_gamma_stderr = {}", sig12(tf.stderr));
                    println!("tail_n_used = {}", tf.n_used);
                }
                Err(e) => println!("warning = tail fit: {e}"),
            }
            Ok(())
        }
        Command::Analyze {
            input,
            t_cut,
            t_min_tail,
            t_cross,
            seed,
            out_dir,
            unit,
            strict,
        } => {
            let cfg = AnalyzeConfig {
                input: input.input.clone(),
                mode: match input.mode {
                    ModeArg::Durations => Mode::Durations,
                    ModeArg::Fpt => Mode::FirstPassage,
                },
                threshold: input.threshold,
                reset: input.reset(),
                t_cut,
                t_min_tail,
                t_cross: parse_crossover(&t_cross)?,
                seed,
                out_dir,
                unit: match unit {
                    UnitArg::S => Unit::Seconds,
                    UnitArg::Min => Unit::Minutes,
                },
                strict,
            };
            let rep = run_analyze(&cfg)?;
            print!("{}", rep.render());
            Ok(())
        }
        Command::Simulate {
            dist,
            n_events,
            n_probes,
            seed,
            out_dir,
        } => {
            let spec = DistSpec::parse(&dist)?;
            let events = simulate_renewal(spec.as_dist(), n_events, seed)?;
            let rows: Vec<Vec<f64>> = events.iter().map(|&t| vec![t]).collect();
            let path = write_table(
                &out_dir,
                "events.tsv",
                "simulated renewal event times (seconds)",
                &["timestamp"],
                &rows,
            )?;
            println!("n_events = {n_events}");
            println!("written = {}", path.display());
            if n_probes > 0 {
                let probe = residual_life_probe(&events, n_probes, seed)?;
                println!("mean_residual = {}", sig12(probe.mean_residual));
                println!("stderr = {}", sig12(probe.stderr));
                println!("n_probes = {}", probe.n_probes);
            }
            Ok(())
        }
        Command::Plotdata {
            dist,
            seed,
            out_dir,
        } => {
            // drive the full table emission off a synthetic sample of the
            // requested distribution, so every figure analogue comes out
            let spec = DistSpec::parse(&dist)?;
            let events = simulate_renewal(spec.as_dist(), 50_000, seed)?;
            let sample = extract_durations(&events)?;
            let cfg = AnalyzeConfig::new(PathBuf::from("synthetic"), out_dir);
            let rep = analyze_sample(&sample, &cfg)?;
            print!("{}", rep.render());
            Ok(())
        }
    }
}

fn parse_crossover(s: &str) -> Result<CrossoverPolicy> {
    if s == "optimal" {
        return Ok(CrossoverPolicy::Optimal);
    }
    if let Some(v) = s.strip_prefix("fixed:") {
        let v: f64 = v
            .parse()
            .map_err(|_| PipelineError::data(format!("bad fixed crossover value {v:?}")))?;
        if !(v > 0.0) {
            return Err(PipelineError::data(format!(
                "crossover must be > 0, got {v}"
            )));
        }
        return Ok(CrossoverPolicy::Fixed(v));
    }
    Err(PipelineError::data(format!(
        "bad --t-cross value {s:?}; expected `optimal` or `fixed:<seconds>`"
    )))
}
