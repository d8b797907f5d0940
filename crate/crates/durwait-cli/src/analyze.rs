//! The end-to-end analysis: extraction -> fitting -> renewal/Gini -> report
//! plus the six plot-data tables. Stage failures downgrade to warnings so a
//! partial report still comes out; only unusable input aborts.

use std::path::PathBuf;

use durwait_core::distributions::{TailWeibullParams, WeibullParams};
use durwait_core::fitting::{
    crossover_diagnostics, optimal_crossover, tail_exponent_fit, weibull_paper_fit, TailFit,
    WeibullPaperFit,
};
use durwait_core::gini::{gini_analytic, gini_beta_sweep, gini_empirical, lorentz_curve};
use durwait_core::renewal::{
    empirical_waiting_time, inspection_paradox, ml_waiting_time_curve, tail_weibull_waiting_time,
    tail_weibull_waiting_time_curve, weibull_waiting_time,
};
use durwait_core::CoreError;

use crate::error::{PipelineError, Result};
use crate::extract::{extract_durations, extract_first_passage, DurationSample, ResetRule};
use crate::format::sig12;
use crate::ingest;
use crate::report::AnalysisReport;
use crate::tables::{lin_grid, log_grid, write_table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Durations,
    FirstPassage,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CrossoverPolicy {
    Fixed(f64),
    Optimal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Seconds,
    Minutes,
}

impl Unit {
    fn suffix(self) -> &'static str {
        match self {
            Unit::Seconds => "_s",
            Unit::Minutes => "_min",
        }
    }

    fn scale(self) -> f64 {
        match self {
            Unit::Seconds => 1.0,
            Unit::Minutes => 1.0 / 60.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnalyzeConfig {
    pub input: PathBuf,
    pub mode: Mode,
    /// First-passage threshold in price units (FirstPassage mode only).
    pub threshold: f64,
    pub reset: ResetRule,
    /// Upper time limit of the Weibull double-log fit window.
    pub t_cut: Option<f64>,
    /// Lower time limit of the tail fit; default is the 95th percentile.
    pub t_min_tail: Option<f64>,
    pub t_cross: CrossoverPolicy,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub unit: Unit,
    /// Heavy tail (gamma <= 3) aborts with exit code 4 instead of a warning.
    pub strict: bool,
}

impl AnalyzeConfig {
    pub fn new(input: PathBuf, out_dir: PathBuf) -> Self {
        AnalyzeConfig {
            input,
            mode: Mode::Durations,
            threshold: 0.1,
            reset: ResetRule::AtEventPrice,
            t_cut: None,
            t_min_tail: None,
            t_cross: CrossoverPolicy::Optimal,
            seed: 0,
            out_dir,
            unit: Unit::Seconds,
            strict: false,
        }
    }
}

pub fn run_analyze(cfg: &AnalyzeConfig) -> Result<AnalysisReport> {
    let sample = match cfg.mode {
        Mode::Durations => {
            let ts = ingest::read_timestamps(&cfg.input)
                .map_err(|e| e.in_stage("extract"))?;
            extract_durations(&ts).map_err(|e| e.in_stage("extract"))?
        }
        Mode::FirstPassage => {
            let series = ingest::read_tick_series(&cfg.input)
                .map_err(|e| e.in_stage("extract"))?;
            extract_first_passage(&series, cfg.threshold, cfg.reset)
                .map_err(|e| e.in_stage("extract"))?
                .durations
        }
    };
    analyze_sample(&sample, cfg)
}

/// Core of `analyze`, starting from already-extracted durations (seconds).
pub fn analyze_sample(sample: &DurationSample, cfg: &AnalyzeConfig) -> Result<AnalysisReport> {
    let mut rep = AnalysisReport::default();
    let u = cfg.unit.suffix();
    let k = cfg.unit.scale();
    let d = &sample.durations;
    if d.len() < 2 {
        return Err(PipelineError::data(format!(
            "need at least 2 durations, got {}",
            d.len()
        ))
        .in_stage("extract"));
    }

    // --- sample summary ----------------------------------------------------
    let n = d.len() as f64;
    let mean = d.iter().sum::<f64>() / n;
    let m2 = d.iter().map(|&t| t * t).sum::<f64>() / n;
    rep.add_int("n", d.len());
    rep.add_int("zero_durations", sample.zero_count);
    if sample.zero_count > 0 {
        rep.warn(format!("{} zero durations retained", sample.zero_count));
    }
    rep.add_num(&format!("mean{u}"), mean * k);
    rep.add_num(&format!("second_moment{u}2"), m2 * k * k);

    let w_emp = empirical_waiting_time(d)
        .map_err(|e| PipelineError::from(e).in_stage("renewal"))?
        .w;
    rep.add_num(&format!("w_empirical{u}"), w_emp * k);

    // --- fitting ------------------------------------------------------------
    let t_cut = cfg.t_cut.unwrap_or(f64::INFINITY);
    let body_fit: Option<WeibullPaperFit> = match weibull_paper_fit(d, t_cut) {
        Ok(f) => {
            rep.add_num("fit_m", f.m);
            rep.add_num("fit_a", f.a);
            rep.add_num("fit_r_squared", f.r_squared);
            rep.add_num(&format!("fit_t_cut{u}"), f.t_cut * k);
            rep.add_int("fit_n_used", f.n_used);
            Some(f)
        }
        Err(e) => {
            rep.warn(format!("fitting stage: {e}"));
            None
        }
    };

    let t_min_tail = cfg.t_min_tail.unwrap_or_else(|| percentile(d, 0.95));
    rep.add_num(&format!("tail_t_min{u}"), t_min_tail * k);
    let tail_fit: Option<TailFit> = match tail_exponent_fit(d, t_min_tail) {
        Ok(f) => {
            rep.add_num("tail_gamma", f.gamma);
            rep.add_num("tail_gamma_stderr", f.stderr);
            rep.add_int("tail_n_used", f.n_used);
            Some(f)
        }
        Err(e) => {
            rep.warn(format!("fitting stage: {e}"));
            None
        }
    };

    // --- renewal ------------------------------------------------------------
    let mut heavy_tail: Option<CoreError> = None;
    let mut t_star = None;
    if let Some(f) = &body_fit {
        match weibull_waiting_time(&WeibullParams::new(f.m, f.a).map_err(PipelineError::from)?) {
            Ok(r) => {
                rep.add_num(&format!("w_weibull{u}"), r.w * k);
                add_gap(&mut rep, &format!("dw_weibull{u}"), w_emp * k, r.w * k);
            }
            Err(e) => rep.warn(format!("renewal stage: {e}")),
        }
        match inspection_paradox(&WeibullParams::new(f.m, f.a).map_err(PipelineError::from)?) {
            Ok(p) => {
                rep.add_str("paradox", if p.paradox { "true" } else { "false" });
                rep.add_num("w_over_mean", p.w_over_mean);
                if p.paradox {
                    rep.warn(format!(
                        "inspection paradox: waiting time exceeds mean duration (m = {} < 1)",
                        sig12(f.m)
                    ));
                }
            }
            Err(e) => rep.warn(format!("renewal stage: {e}")),
        }
        if let Some(tf) = &tail_fit {
            match optimal_crossover(f.m, f.a, tf.gamma) {
                Ok(ts) => {
                    rep.add_num(&format!("t_cross_optimal{u}"), ts * k);
                    t_star = Some(ts);
                }
                Err(e) => rep.warn(format!("crossover stage: {e}")),
            }
            let chosen = match cfg.t_cross {
                CrossoverPolicy::Fixed(v) => Some(v),
                CrossoverPolicy::Optimal => t_star,
            };
            if let Some(tx) = chosen {
                rep.add_num(&format!("t_cross{u}"), tx * k);
                heavy_tail =
                    add_tail_w(&mut rep, f, tf.gamma, tx, &format!("w_tail{u}"), w_emp, cfg);
            }
            if let Some(ts) = t_star {
                if chosen != Some(ts) {
                    let e = add_tail_w(
                        &mut rep,
                        f,
                        tf.gamma,
                        ts,
                        &format!("w_tail_optimal{u}"),
                        w_emp,
                        cfg,
                    );
                    heavy_tail = heavy_tail.or(e);
                }
            }
        }
    }

    // --- Gini ---------------------------------------------------------------
    match gini_empirical(d) {
        Ok(g) => rep.add_num("gini_empirical", g),
        Err(e) => rep.warn(format!("gini stage: {e}")),
    }
    if let Some(f) = &body_fit {
        let analytic = WeibullParams::new(f.m, f.a)
            .and_then(|p| {
                // grid out to survival 1e-9 so the cut-off bias is below
                // the refinement tolerance
                let r_max = durwait_core::distributions::weibull_quantile(1e-9, &p)?;
                gini_analytic(&p, r_max, 1024)
            });
        match analytic {
            Ok(g) => rep.add_num("gini_weibull_fit", g),
            Err(e) => rep.warn(format!("gini stage: {e}")),
        }
    }

    // --- plot tables ----------------------------------------------------------
    if let Err(e) = emit_tables(sample, &rep, body_fit.as_ref(), tail_fit.as_ref(), t_star, cfg) {
        rep.warn(format!("table stage: {e}"));
    }

    std::fs::create_dir_all(&cfg.out_dir)?;
    std::fs::write(cfg.out_dir.join("report.txt"), rep.render())?;

    if cfg.strict {
        if let Some(e) = heavy_tail {
            return Err(PipelineError::from(e).in_stage("renewal"));
        }
    }
    Ok(rep)
}

/// Tail-corrected waiting time at one crossover; heavy tails leave a warning
/// (and no w entry) instead of a value. Returns the heavy-tail error so the
/// caller can escalate it under --strict.
fn add_tail_w(
    rep: &mut AnalysisReport,
    f: &WeibullPaperFit,
    gamma: f64,
    t_cross: f64,
    key: &str,
    w_emp: f64,
    cfg: &AnalyzeConfig,
) -> Option<CoreError> {
    let k = cfg.unit.scale();
    let p = match TailWeibullParams::new(f.m, f.a, gamma, t_cross) {
        Ok(p) => p,
        Err(e) => {
            rep.warn(format!("renewal stage: {e}"));
            return None;
        }
    };
    match tail_weibull_waiting_time(&p) {
        Ok(r) => {
            rep.add_num(key, r.w * k);
            add_gap(rep, &format!("d{key}"), w_emp * k, r.w * k);
            if r.diagnostics.contains_key("warn_gamma_variance") {
                rep.warn(format!(
                    "tail exponent gamma = {} is close to the variance boundary 3; \
                     the tail second moment is poorly conditioned",
                    sig12(gamma)
                ));
            }
            None
        }
        Err(e @ CoreError::HeavyTail { .. }) => {
            rep.warn(format!(
                "heavy tail: gamma = {} <= 3, tail-corrected waiting time diverges \
                 and is not reported",
                sig12(gamma)
            ));
            Some(e)
        }
        Err(e) => {
            rep.warn(format!("renewal stage: {e}"));
            None
        }
    }
}

/// Record the empirical-minus-analytic gap computed from the values exactly
/// as they appear in the report (12-digit rendering), so the report's own
/// arithmetic closes.
fn add_gap(rep: &mut AnalysisReport, key: &str, w_emp: f64, w_analytic: f64) {
    let recorded_emp: f64 = sig12(w_emp).parse().unwrap_or(w_emp);
    let recorded_ana: f64 = sig12(w_analytic).parse().unwrap_or(w_analytic);
    rep.add_num(key, recorded_emp - recorded_ana);
}

fn percentile(samples: &[f64], q: f64) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let idx = ((s.len() as f64 - 1.0) * q).round() as usize;
    s[idx.min(s.len() - 1)]
}

fn emit_tables(
    sample: &DurationSample,
    rep: &AnalysisReport,
    body_fit: Option<&WeibullPaperFit>,
    tail_fit: Option<&TailFit>,
    t_star: Option<f64>,
    cfg: &AnalyzeConfig,
) -> Result<()> {
    let _ = rep;
    let out = &cfg.out_dir;

    // survival vs fitted curves
    let surv = durwait_core::fitting::empirical_survival(&sample.durations)
        .map_err(PipelineError::from)?;
    let mut rows = Vec::with_capacity(surv.len());
    let tail_params = match (body_fit, tail_fit, t_star) {
        (Some(f), Some(tf), Some(ts)) => TailWeibullParams::new(f.m, f.a, tf.gamma, ts).ok(),
        _ => None,
    };
    for &(t, s) in &surv {
        let s_w = match body_fit {
            Some(f) => WeibullParams::new(f.m, f.a)
                .and_then(|p| durwait_core::distributions::weibull_survival(t, &p))
                .unwrap_or(f64::NAN),
            None => f64::NAN,
        };
        let s_tw = match &tail_params {
            // normalized survival of the piecewise density
            Some(p) => piecewise_survival(t, p).unwrap_or(f64::NAN),
            None => f64::NAN,
        };
        rows.push(vec![t, s, s_w, s_tw]);
    }
    write_table(
        out,
        "survival_vs_fits.tsv",
        "empirical survival vs fitted Weibull and tail-corrected Weibull",
        &["t", "s_empirical", "s_weibull", "s_tail_weibull"],
        &rows,
    )?;

    if let (Some(f), Some(tf)) = (body_fit, tail_fit) {
        let center = t_star.unwrap_or_else(|| percentile(&sample.durations, 0.95));
        let sweep = log_grid(center * 0.1, center * 10.0, 121);

        // w as a function of the crossover (raw formula values, so heavy
        // tails show their negative-trending curve)
        let curve = tail_weibull_waiting_time_curve(f.m, f.a, tf.gamma, &sweep)
            .map_err(PipelineError::from)?;
        let rows: Vec<Vec<f64>> = curve.iter().map(|&(t, w)| vec![t, w]).collect();
        write_table(
            out,
            "w_vs_tcross.tsv",
            "tail-corrected waiting time vs crossover point (raw formula values)",
            &["t_cross", "w"],
            &rows,
        )?;

        // matching-error root and amplitude along the same sweep
        match crossover_diagnostics(f.m, f.a, tf.gamma, &sweep) {
            Ok(diag) => {
                let rows: Vec<Vec<f64>> = diag
                    .d_values
                    .iter()
                    .zip(&diag.lambda_values)
                    .map(|(&(t, dv), &(_, lv))| vec![t, dv, lv])
                    .collect();
                write_table(
                    out,
                    "d_function.tsv",
                    "crossover matching function D and tail amplitude lambda vs t_cross",
                    &["t_cross", "d", "lambda"],
                    &rows,
                )?;
            }
            Err(e) => return Err(PipelineError::from(e)),
        }
    }

    if let Some(f) = body_fit {
        // Lorentz curve of the fitted Weibull, with the exponential
        // reference curve Y = X + (1-X) ln(1-X)
        let p = WeibullParams::new(f.m, f.a).map_err(PipelineError::from)?;
        let r_max = durwait_core::distributions::weibull_quantile(1e-9, &p)
            .map_err(PipelineError::from)?;
        let curve = lorentz_curve(&p, r_max, 512).map_err(PipelineError::from)?;
        let rows: Vec<Vec<f64>> = curve
            .points
            .iter()
            .map(|&(x, y)| {
                let y_exp = if x < 1.0 {
                    x + (1.0 - x) * (1.0 - x).ln()
                } else {
                    1.0
                };
                vec![x, y, y_exp]
            })
            .collect();
        write_table(
            out,
            "lorentz.tsv",
            "Lorentz curve of the fitted Weibull with the exponential reference",
            &["x", "y_weibull_fit", "y_exponential"],
            &rows,
        )?;
    }

    // Gini vs beta and w vs t_max for the truncated Mittag-Leffler family,
    // scaled to the sample mean. The shape comes from the fitted tail
    // (beta = gamma - 1) when that lands in (0, 1]; otherwise a beta = 0.96
    // reference curve is emitted.
    let mean = sample.durations.iter().sum::<f64>() / sample.durations.len() as f64;
    let t0 = if mean > 0.0 { mean } else { 1.0 };
    let beta_ref = match tail_fit {
        Some(tf) if tf.gamma - 1.0 > 0.05 && tf.gamma - 1.0 <= 1.0 => tf.gamma - 1.0,
        _ => 0.96,
    };

    let beta_grid = lin_grid(0.60, 1.0, 9);
    let sweep = gini_beta_sweep(t0, 100.0 * t0, &beta_grid, 512).map_err(PipelineError::from)?;
    let rows: Vec<Vec<f64>> = sweep.iter().map(|&(b, g)| vec![b, g]).collect();
    write_table(
        out,
        "gini_vs_beta.tsv",
        "Gini index of the truncated Mittag-Leffler family vs beta (t_max = 100 t0)",
        &["beta", "gini"],
        &rows,
    )?;

    let tmax_grid = log_grid(10.0 * t0, 1e4 * t0, 25);
    let curve = ml_waiting_time_curve(beta_ref, t0, &tmax_grid).map_err(PipelineError::from)?;
    let rows: Vec<Vec<f64>> = curve.iter().map(|&(t, w)| vec![t, w]).collect();
    write_table(
        out,
        "w_vs_tmax.tsv",
        "truncated Mittag-Leffler waiting time vs truncation time",
        &["t_max", "w"],
        &rows,
    )?;

    Ok(())
}

/// Normalized survival of the Weibull-plus-power-tail density.
fn piecewise_survival(t: f64, p: &TailWeibullParams) -> Option<f64> {
    let mass = durwait_core::distributions::tail_weibull_mass(p);
    if t <= p.t_cross() {
        let body = WeibullParams::new(p.m(), p.a()).ok()?;
        let s = durwait_core::distributions::weibull_survival(t, &body).ok()?;
        // everything beyond the body below t_cross is replaced by the tail
        let body_above_cross =
            durwait_core::distributions::weibull_survival(p.t_cross(), &body).ok()?;
        Some((s - body_above_cross + p.tail_mass()) / mass)
    } else {
        // integral of lambda u^-gamma over (t, infinity)
        let g = p.gamma();
        Some(p.lambda() * t.powf(1.0 - g) / ((g - 1.0) * mass))
    }
}
