//! Acceptance gate: one test per criterion, each printing a single
//! PASS/FAIL line with per-item detail. Targets and tolerances are the
//! published reference values; where our computed value genuinely
//! disagrees with a published number, the item fails here and the
//! discrepancy is documented rather than the check loosened.

use durwait_core::distributions::{
    weibull_quantile, DurationDistribution, MLApproximantParams, TailWeibullParams,
    TruncatedMLParams, WeibullParams,
};
use durwait_core::fitting::{
    crossover_diagnostics, optimal_crossover, tail_exponent_fit_points, weibull_paper_fit,
    weibull_paper_fit_points, SecondDerivativeSign,
};
use durwait_core::gini::{gini_analytic, gini_empirical, ml_gini_cutoff_convention};
use durwait_core::renewal::{
    inspection_paradox, ml_waiting_time_curve, tail_weibull_waiting_time, weibull_waiting_time,
};
use durwait_core::specfun::{ml_pdf, ml_survival, reg_lower_incomplete_gamma, MLSeriesConfig};

use durwait_cli::analyze::{analyze_sample, AnalyzeConfig};
use durwait_cli::extract::{extract_durations, DurationSample};
use durwait_cli::mc::{residual_life_probe, simulate_renewal, DistSpec};

struct Item {
    label: String,
    ok: bool,
}

fn item(label: impl Into<String>, ok: bool) -> Item {
    Item {
        label: label.into(),
        ok,
    }
}

fn verdict(criterion: &str, items: &[Item]) {
    let all = items.iter().all(|i| i.ok);
    let detail: Vec<String> = items
        .iter()
        .map(|i| format!("{} [{}]", i.label, if i.ok { "pass" } else { "FAIL" }))
        .collect();
    let line = format!(
        "{criterion}: {} — {}",
        if all { "PASS" } else { "FAIL" },
        detail.join("; ")
    );
    println!("{line}");
    assert!(all, "{line}");
}

fn rel(value: f64, target: f64) -> f64 {
    ((value - target) / target).abs()
}

#[test]
fn criterion_01_pure_weibull_waiting_time() {
    let w = |m: f64, a: f64| weibull_waiting_time(&WeibullParams::new(m, a).unwrap()).unwrap().w;
    let w1 = w(0.585, 49.63) / 60.0; // minutes
    let w2 = w(0.85, 10.02);
    let w3 = w(0.99, 16.49);
    verdict(
        "criterion 1 (pure-Weibull waiting time)",
        &[
            item(
                format!("w(0.585,49.63) = {w1:.4} min vs 44.62 +- 1%"),
                rel(w1, 44.62) < 0.01,
            ),
            item(
                format!("w(0.85,10.02) = {w2:.4} s vs 30.0 +- 1%"),
                rel(w2, 30.0) < 0.01,
            ),
            item(
                format!("w(0.99,16.49) = {w3:.4} s vs 16.70 +- 0.5%"),
                rel(w3, 16.70) < 0.005,
            ),
        ],
    );
}

#[test]
fn criterion_02_tail_corrected_waiting_time() {
    let w_at = |tx: f64| {
        tail_weibull_waiting_time(&TailWeibullParams::new(0.585, 49.63, 4.67, tx).unwrap())
            .unwrap()
            .w
            / 60.0
    };
    let w_fixed = w_at(18000.0);
    let t_star = optimal_crossover(0.585, 49.63, 4.67).unwrap();
    let w_opt = w_at(t_star);
    verdict(
        "criterion 2 (tail-corrected waiting time)",
        &[
            item(
                format!("w(tx=18000) = {w_fixed:.4} min vs 45.66 +- 1%"),
                rel(w_fixed, 45.66) < 0.01,
            ),
            item(
                format!("w(tx*={t_star:.1}) = {w_opt:.4} min vs 46.25 +- 1%"),
                rel(w_opt, 46.25) < 0.01,
            ),
        ],
    );
}

#[test]
fn criterion_03_optimal_crossover() {
    let t1 = optimal_crossover(0.585, 49.63, 4.67).unwrap();
    let t2 = optimal_crossover(0.70, 6.05, 1.96).unwrap();
    let t3 = optimal_crossover(0.99, 16.49, 1.96).unwrap();

    // D-function root: bisect D on a bracket around t1 and compare
    let d = |t: f64| durwait_core::fitting::d_function(t, 0.585, 49.63, 4.67);
    let (mut lo, mut hi) = (t1 * 0.5, t1 * 2.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if d(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);

    // lambda-argmax on a fine grid bracketing t1
    let n = 4001;
    let sweep: Vec<f64> = (0..n)
        .map(|i| t1 * 0.5 + (t1 * 1.5) * i as f64 / (n - 1) as f64)
        .collect();
    let diag = crossover_diagnostics(0.585, 49.63, 4.67, &sweep).unwrap();
    let argmax = diag
        .lambda_values
        .iter()
        .cloned()
        .fold((0.0, f64::NEG_INFINITY), |acc, (t, l)| {
            if l > acc.1 {
                (t, l)
            } else {
                acc
            }
        })
        .0;
    let step = sweep[1] - sweep[0];

    verdict(
        "criterion 3 (optimal crossover)",
        &[
            item(
                format!("tx*(Sony) = {t1:.4} s vs 23538.3 +- 1"),
                (t1 - 23538.3).abs() < 1.0,
            ),
            item(
                format!("tx*(0.70,6.05,1.96) = {t2:.4} s vs 44.9 +- 0.1"),
                (t2 - 44.9).abs() < 0.1,
            ),
            item(
                format!("tx*(0.99,16.49,1.96) = {t3:.4} s vs 33.5 +- 0.1"),
                (t3 - 33.5).abs() < 0.1,
            ),
            item(
                format!("D root {root:.6} vs formula, rel {:.2e}", rel(root, t1)),
                rel(root, t1) < 1e-9,
            ),
            item(
                format!("lambda argmax within one grid step ({:.4})", (argmax - t1).abs()),
                (argmax - t1).abs() <= step && diag.second_derivative_sign
                    == SecondDerivativeSign::MinimumConfirmed,
            ),
        ],
    );
}

#[test]
fn criterion_04_gini() {
    // the published 0.51 uses the cut-off Lorentz convention
    // (X = 1 - S(r), not renormalized below r_max)
    let g_ml = ml_gini_cutoff_convention(0.96, 12.0, 100.0, 8192).unwrap();

    let expo = WeibullParams::exponential(1.0).unwrap();
    let g_exp = gini_analytic(&expo, weibull_quantile(1e-9, &expo).unwrap(), 2048).unwrap();

    let g100 = gini_analytic(
        &TruncatedMLParams::new(0.96, 12.0, 100.0).unwrap(),
        100.0,
        2048,
    )
    .unwrap();
    let g1000 = gini_analytic(
        &TruncatedMLParams::new(0.96, 12.0, 1000.0).unwrap(),
        1000.0,
        2048,
    )
    .unwrap();
    let drift = (g100 - g1000).abs();

    verdict(
        "criterion 4 (Gini)",
        &[
            item(
                format!("ML(0.96,12,rmax=100) G = {g_ml:.4} vs 0.51 +- 0.01"),
                (g_ml - 0.51).abs() < 0.01,
            ),
            item(
                format!("exponential G = {g_exp:.5} vs 0.5 +- 1e-3"),
                (g_exp - 0.5).abs() < 1e-3,
            ),
            item(
                format!("cut-off robustness |G(100)-G(1000)| = {drift:.4} < 0.02"),
                drift < 0.02,
            ),
        ],
    );
}

#[test]
fn criterion_05_divergence_law() {
    // truncated-ML waiting time grows ~t_max for beta = 0.5
    let t0 = 1.0;
    let curve = ml_waiting_time_curve(0.5, t0, &[1e4 * t0, 1e6 * t0]).unwrap();
    let slope_ml =
        (curve[1].1.ln() - curve[0].1.ln()) / ((1e6f64 * t0).ln() - (1e4f64 * t0).ln());

    // approximant-density regimes across the beta cases
    let mut items = vec![item(
        format!("truncated-ML slope(beta=0.5) = {slope_ml:.4} vs 1.00 +- 0.05"),
        (slope_ml - 1.0).abs() < 0.05,
    )];
    for &(beta, want) in &[(1.5, 0.5), (2.5, 0.0)] {
        let p = MLApproximantParams::new(beta, 1.0, 5.0).unwrap();
        let w1 = p.truncated_waiting_time(1e5).unwrap();
        let w2 = p.truncated_waiting_time(1e7).unwrap();
        let slope = (w2.ln() - w1.ln()) / (1e7f64.ln() - 1e5f64.ln());
        items.push(item(
            format!("approximant slope(beta={beta}) = {slope:.4} vs {want} +- 0.05"),
            (slope - want).abs() < 0.05,
        ));
    }
    verdict("criterion 5 (divergence law)", &items);
}

#[test]
fn criterion_06_inspection_paradox() {
    let flag = |m: f64| {
        inspection_paradox(&WeibullParams::new(m, 1.0).unwrap())
            .unwrap()
            .paradox
    };
    let iff = (0..40).all(|i| {
        let m = 0.2 + 2.3 * i as f64 / 39.0;
        flag(m) == (m < 1.0 - 1e-12)
    });

    // bisect the flip point of the paradox flag
    let (mut lo, mut hi) = (0.5, 2.0);
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if flag(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let flip = 0.5 * (lo + hi);

    let ratio = inspection_paradox(&WeibullParams::new(0.5, 1.0).unwrap())
        .unwrap()
        .w_over_mean;

    verdict(
        "criterion 6 (inspection paradox)",
        &[
            item("paradox flag true iff m < 1 over a shape sweep", iff),
            item(
                format!("flag flips at m = {flip:.9} vs 1 +- 1e-6"),
                (flip - 1.0).abs() < 1e-6,
            ),
            item(
                format!("w/mean at m = 0.5 is {ratio:.12} vs 3"),
                (ratio - 3.0).abs() < 1e-12,
            ),
        ],
    );
}

#[test]
fn criterion_07_monte_carlo_closure() {
    let mut items = Vec::new();
    // analytic targets from the closed forms (themselves pinned against
    // high-precision references in the unit tests)
    let w_weib = |m: f64, a: f64| {
        weibull_waiting_time(&WeibullParams::new(m, a).unwrap())
            .unwrap()
            .w
    };
    let w_sony = tail_weibull_waiting_time(
        &TailWeibullParams::new(0.585, 49.63, 4.67, 23538.2577).unwrap(),
    )
    .unwrap()
    .w;
    let cases: &[(&str, f64)] = &[
        ("weibull:0.585,49.63", w_weib(0.585, 49.63)),
        ("weibull:1,49.63", w_weib(1.0, 49.63)),
        ("weibull:2,49.63", w_weib(2.0, 49.63)),
        ("tailweibull:0.585,49.63,4.67,23538.2577", w_sony),
    ];
    for (i, &(spec, w_ref)) in cases.iter().enumerate() {
        let dist = DistSpec::parse(spec).unwrap();
        let events = simulate_renewal(dist.as_dist(), 1_000_000, 1000 + i as u64).unwrap();
        let probe = residual_life_probe(&events, 100_000, 2000 + i as u64).unwrap();
        let dev = (probe.mean_residual - w_ref).abs() / probe.stderr;
        items.push(item(
            format!("{spec}: residual {:.2} vs w {:.2}, {dev:.2} stderr", probe.mean_residual, w_ref),
            dev < 3.0,
        ));
    }

    // empirical Gini of exponential draws
    let expo = WeibullParams::exponential(1.0).unwrap();
    let n = 100_000;
    let draws: Vec<f64> = (0..n)
        .map(|i| expo.sample_u((i as f64 + 0.5) / n as f64).unwrap())
        .collect();
    let g = gini_empirical(&draws).unwrap();
    items.push(item(
        format!("empirical Gini of 1e5 exponential draws = {g:.4} vs 0.5 +- 0.01"),
        (g - 0.5).abs() < 0.01,
    ));

    verdict("criterion 7 (Monte Carlo closure)", &items);
}

#[test]
fn criterion_08_fit_recovery() {
    // shape recovery from 1e5 synthetic Weibull draws (stratified u)
    let p = WeibullParams::new(0.585, 49.63).unwrap();
    let n = 100_000;
    let draws: Vec<f64> = (0..n)
        .map(|i| p.sample_u((i as f64 + 0.5) / n as f64).unwrap())
        .collect();
    let fit = weibull_paper_fit(&draws, f64::INFINITY).unwrap();

    // tail fit on an exact Pareto survival grid: S = C t^(1-gamma)
    let gamma = 4.67;
    let pts: Vec<(f64, f64)> = (0..50)
        .map(|i| {
            let t = 100.0 * 1.2f64.powi(i);
            (t, 0.3 * (t / 100.0).powf(1.0 - gamma))
        })
        .collect();
    let tail = tail_exponent_fit_points(&pts, 50.0).unwrap();

    // exact-grid Weibull fit
    let grid: Vec<(f64, f64)> = (1..200)
        .map(|i| {
            let t = 2.0 * i as f64;
            (t, durwait_core::distributions::weibull_survival(t, &p).unwrap())
        })
        .collect();
    let exact = weibull_paper_fit_points(&grid, f64::INFINITY).unwrap();

    verdict(
        "criterion 8 (fit recovery)",
        &[
            item(
                format!("synthetic draws: m = {:.4} vs 0.585 +- 0.02", fit.m),
                (fit.m - 0.585).abs() < 0.02,
            ),
            item(
                format!("Pareto grid: gamma = {:.12} vs 4.67 to 1e-9", tail.gamma),
                (tail.gamma - gamma).abs() < 1e-9,
            ),
            item(
                format!(
                    "exact grid: m = {:.12}, a = {:.9} to 1e-9",
                    exact.m, exact.a
                ),
                (exact.m - 0.585).abs() < 1e-9 && rel(exact.a, 49.63) < 1e-9,
            ),
        ],
    );
}

#[test]
fn criterion_09_heavy_tail_refusal() {
    // gamma = 1.96 sample through the full pipeline
    let p = TailWeibullParams::new(0.70, 6.05, 1.96, 100.0).unwrap();
    let n = 40_000;
    let durations: Vec<f64> = (0..n)
        .map(|i| p.sample_u((i as f64 + 0.5) / n as f64).unwrap())
        .collect();
    let sample = DurationSample {
        durations,
        zero_count: 0,
    };
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = AnalyzeConfig::new("synthetic".into(), dir.path().to_path_buf());
    cfg.t_cut = Some(80.0);
    let rep = analyze_sample(&sample, &cfg).unwrap();

    let warned = rep.has_warning_containing("heavy tail");
    let no_w = rep.get("w_tail_s").is_none();

    // the raw-formula curve data trends negative in the tail-dominated range
    let table = std::fs::read_to_string(dir.path().join("w_vs_tcross.tsv")).unwrap();
    let min_w = table
        .lines()
        .skip(2)
        .map(|l| l.split('\t').nth(1).unwrap().parse::<f64>().unwrap())
        .fold(f64::INFINITY, f64::min);

    cfg.strict = true;
    let code = analyze_sample(&sample, &cfg).unwrap_err().exit_code();

    verdict(
        "criterion 9 (heavy-tail refusal)",
        &[
            item("report carries the heavy-tail warning", warned),
            item("no tail-corrected w reported", no_w),
            item(
                format!("raw-formula curve dips negative (min {min_w:.3})"),
                min_w < 0.0,
            ),
            item(format!("strict mode exit code {code} = 4"), code == 4),
        ],
    );
}

#[test]
fn criterion_10_special_functions() {
    // beta = 1 Mittag-Leffler survival degenerates to the exponential
    let cfg = MLSeriesConfig::for_shape(1.0);
    let mut max_dev: f64 = 0.0;
    for i in 0..=3000 {
        let t = 30.0 * i as f64 / 3000.0;
        let s = ml_survival(t, 1.0, 1.0, &cfg).unwrap();
        max_dev = max_dev.max((s - (-t).exp()).abs());
    }

    // density vs central finite difference of the survival
    let cfg96 = MLSeriesConfig::for_shape(0.96);
    let mut max_rel: f64 = 0.0;
    for &t in &[2.0, 8.0, 40.0, 120.0] {
        // h balances truncation against the series' rounding noise
        let h = 1e-4 * t;
        let pdf = ml_pdf(t, 12.0, 0.96, &cfg96).unwrap();
        let fd = (ml_survival(t - h, 12.0, 0.96, &cfg96).unwrap()
            - ml_survival(t + h, 12.0, 0.96, &cfg96).unwrap())
            / (2.0 * h);
        max_rel = max_rel.max(rel(fd, pdf));
    }

    // recurrence P(s+1, x) = P(s, x) - x^s e^(-x) / Gamma(s+1)
    let mut max_rec: f64 = 0.0;
    for &s in &[0.5, 1.7094017094017093, 3.4188034188034186] {
        for &x in &[0.3, 1.0, 4.0, 9.0] {
            let lhs = reg_lower_incomplete_gamma(s + 1.0, x).unwrap();
            let g = (s * x.ln() - x
                - durwait_core::specfun::ln_gamma(s + 1.0).unwrap())
            .exp();
            let rhs = reg_lower_incomplete_gamma(s, x).unwrap() - g;
            max_rec = max_rec.max((lhs - rhs).abs());
        }
    }

    verdict(
        "criterion 10 (special functions)",
        &[
            item(
                format!("beta=1 survival vs exponential, max dev {max_dev:.2e}"),
                max_dev < 1e-10,
            ),
            item(
                format!("pdf vs finite-difference survival, max rel {max_rel:.2e}"),
                max_rel < 1e-6,
            ),
            item(
                format!("incomplete-gamma recurrence, max dev {max_rec:.2e}"),
                max_rec < 1e-10,
            ),
        ],
    );
}

#[test]
fn pipeline_examples_from_contract() {
    // sanity rows that the acceptance document quotes directly
    let events = [0.0, 5.0, 7.0];
    let d = extract_durations(&events).unwrap();
    assert_eq!(d.durations, vec![5.0, 2.0]);
}
