//! Average waiting time (equilibrium residual life) w = E(t^2)/2E(t):
//! empirical estimator, closed forms for the Weibull and tail-Weibull
//! families, quadrature and series routes for the truncated Mittag-Leffler
//! distribution, and the inspection-paradox criterion.

use crate::distributions::{truncated_ml_moment, TailWeibullParams, TruncatedMLParams, WeibullParams};
use crate::error::{CoreError, Result};
use crate::specfun;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use libm::{exp, fabs, log, pow};

/// How many terms the alternating waiting-time series may grow above the
/// final sum before the result is declared cancelled to death.
const SERIES_CANCEL_RATIO: f64 = 1e12;

/// Below this tail exponent the formula is valid but the (gamma - 3)
/// denominator amplifies fit noise; a warning diagnostic is attached.
const GAMMA_VARIANCE_WARN: f64 = 3.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaitingTimeMethod {
    Empirical,
    WeibullClosedForm,
    TailWeibullFormula,
    MlTruncatedQuadrature,
    MlTruncatedSeries,
}

/// A waiting-time value with the intermediate quantities that produced it.
#[derive(Debug, Clone)]
pub struct WaitingTimeResult {
    pub w: f64,
    pub method: WaitingTimeMethod,
    pub diagnostics: BTreeMap<String, f64>,
}

fn diag(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|&(k, v)| (String::from(k), v)).collect()
}

/// w = sum(t_i^2) / (2 sum(t_i)) over the observed durations.
pub fn empirical_waiting_time(samples: &[f64]) -> Result<WaitingTimeResult> {
    if samples.len() < 2 {
        return Err(CoreError::Domain(format!(
            "need at least 2 durations, got {}",
            samples.len()
        )));
    }
    let mut s1 = 0.0;
    let mut s2 = 0.0;
    for &t in samples {
        if !(t >= 0.0) {
            return Err(CoreError::Domain(format!("negative or NaN duration {t}")));
        }
        s1 += t;
        s2 += t * t;
    }
    if s1 == 0.0 {
        return Err(CoreError::Domain("all durations are zero".into()));
    }
    let n = samples.len() as f64;
    Ok(WaitingTimeResult {
        w: s2 / (2.0 * s1),
        method: WaitingTimeMethod::Empirical,
        diagnostics: diag(&[("n", n), ("mean", s1 / n), ("second_moment", s2 / n)]),
    })
}

/// Closed form w = a^(1/m) Gamma(2/m) / Gamma(1/m).
pub fn weibull_waiting_time(p: &WeibullParams) -> Result<WaitingTimeResult> {
    let m = p.m();
    let w = exp(
        log(p.a()) / m + specfun::ln_gamma(2.0 / m)? - specfun::ln_gamma(1.0 / m)?,
    );
    Ok(WaitingTimeResult {
        w,
        method: WaitingTimeMethod::WeibullClosedForm,
        diagnostics: diag(&[("mean", p.mean()), ("second_moment", p.raw_moment(2))]),
    })
}

/// The four (unnormalized) moment summands of the piecewise density:
/// Weibull-body and power-tail contributions to E(t) and E(t^2).
fn tail_weibull_summands(p: &TailWeibullParams) -> Result<(f64, f64, f64, f64)> {
    let (m, a, g, tx) = (p.m(), p.a(), p.gamma(), p.t_cross());
    let x = pow(tx, m) / a;
    let lam = p.lambda();
    let body = |k: f64| -> Result<f64> {
        let r = k / m;
        Ok(exp(r * log(a) + specfun::ln_gamma(r)?)
            * r
            * specfun::reg_lower_incomplete_gamma(r + 1.0, x)?)
    };
    let m1_body = body(1.0)?;
    let m2_body = body(2.0)?;
    // integral of lambda t^(k-gamma) over (t_cross, infinity), sign included
    let m1_tail = lam * pow(tx, 2.0 - g) / (g - 2.0);
    let m2_tail = lam * pow(tx, 3.0 - g) / (g - 3.0);
    Ok((m1_body, m1_tail, m2_body, m2_tail))
}

/// Waiting time of the Weibull-plus-power-tail density, w = M2 / (2 M1)
/// with the body moments through the incomplete gamma function and the tail
/// moments in closed form. The normalization mass cancels in the ratio.
///
/// Requires gamma > 3 so the tail second moment converges; for
/// gamma <= 3 the heavy-tail error carries the raw formula value (it can be
/// negative), which is what a blind application of the formula produces.
pub fn tail_weibull_waiting_time(p: &TailWeibullParams) -> Result<WaitingTimeResult> {
    let (m1b, m1t, m2b, m2t) = tail_weibull_summands(p)?;
    let w = (m2b + m2t) / (2.0 * (m1b + m1t));
    if p.gamma() <= 3.0 {
        return Err(CoreError::HeavyTail {
            gamma: p.gamma(),
            raw: w,
        });
    }
    let mut diagnostics = diag(&[
        ("m1_body", m1b),
        ("m1_tail", m1t),
        ("m2_body", m2b),
        ("m2_tail", m2t),
        ("lambda", p.lambda()),
    ]);
    if p.gamma() < GAMMA_VARIANCE_WARN {
        diagnostics.insert(String::from("warn_gamma_variance"), p.gamma());
    }
    Ok(WaitingTimeResult {
        w,
        method: WaitingTimeMethod::TailWeibullFormula,
        diagnostics,
    })
}

/// Truncated-Mittag-Leffler waiting time by quadrature of the first two
/// moments. This is the production route; the alternating series
/// [`ml_truncated_waiting_time_series`] cancels catastrophically beyond
/// t_max/t0 of a few tens and is kept for cross-checks only.
pub fn ml_truncated_waiting_time(p: &TruncatedMLParams) -> Result<WaitingTimeResult> {
    let m1 = truncated_ml_moment(1, p)?;
    let m2 = truncated_ml_moment(2, p)?;
    Ok(WaitingTimeResult {
        w: m2 / (2.0 * m1),
        method: WaitingTimeMethod::MlTruncatedQuadrature,
        diagnostics: diag(&[
            ("m1", m1),
            ("m2", m2),
            ("normalization", p.normalization()?),
        ]),
    })
}

/// Direct evaluation of the alternating-series form of the truncated-ML
/// waiting time,
///
/// w = (t0/2) * sum (-1)^n z^(bn+b+2)/((bn+b+2) Gamma(bn+b))
///            / sum (-1)^n z^(bn+b+1)/((bn+b+1) Gamma(bn+b)),
///
/// z = t_max/t0. Raises a numerical error once the largest term exceeds
/// 1e12 times the sum (no significant digits survive in f64).
pub fn ml_truncated_waiting_time_series(p: &TruncatedMLParams) -> Result<WaitingTimeResult> {
    let beta = p.beta();
    let z = p.t_max() / p.t0();
    let lz = log(z);
    let mut num = 0.0;
    let mut den = 0.0;
    let mut peak_num = 0.0_f64;
    let mut peak_den = 0.0_f64;
    let mut converged = false;
    let mut prev_mag = f64::INFINITY;
    for n in 0..p.series().n_max {
        let e = beta * n as f64 + beta;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let base = exp(e * lz - specfun::ln_gamma(e)?);
        let tn = base * z * z / (e + 2.0);
        let td = base * z / (e + 1.0);
        num += sign * tn;
        den += sign * td;
        peak_num = peak_num.max(tn);
        peak_den = peak_den.max(td);
        if tn < prev_mag && tn < 1e-16 * peak_num {
            converged = true;
            break;
        }
        prev_mag = tn;
    }
    if !converged {
        return Err(CoreError::Numerical {
            what: String::from("waiting-time series did not converge"),
            achieved: prev_mag,
        });
    }
    if peak_num > SERIES_CANCEL_RATIO * fabs(num) || peak_den > SERIES_CANCEL_RATIO * fabs(den) {
        return Err(CoreError::Numerical {
            what: format!(
                "alternating waiting-time series cancelled: peak term {peak_num:e} vs sum {num:e}"
            ),
            achieved: peak_num / fabs(num),
        });
    }
    let peak = peak_num;
    Ok(WaitingTimeResult {
        w: 0.5 * p.t0() * num / den,
        method: WaitingTimeMethod::MlTruncatedSeries,
        diagnostics: diag(&[("numerator", num), ("denominator", den), ("peak_term", peak)]),
    })
}

/// Inspection-paradox check for Weibull durations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InspectionParadox {
    /// True when the mean residual life exceeds the mean duration (m < 1).
    pub paradox: bool,
    /// w / E(t) = m Gamma(2/m) / Gamma(1/m)^2.
    pub w_over_mean: f64,
    /// Gamma(1/m)^2.
    pub l1: f64,
    /// m Gamma(2/m); the paradox boundary is l1 = l2 at m = 1.
    pub l2: f64,
}

pub fn inspection_paradox(p: &WeibullParams) -> Result<InspectionParadox> {
    let m = p.m();
    let g1 = exp(specfun::ln_gamma(1.0 / m)?);
    let l1 = g1 * g1;
    let l2 = m * exp(specfun::ln_gamma(2.0 / m)?);
    let w_over_mean = l2 / l1;
    Ok(InspectionParadox {
        // strict in exact arithmetic; the epsilon keeps the m = 1 boundary
        // (w_over_mean exactly 1) from flipping on gamma-function rounding
        paradox: w_over_mean > 1.0 + 1e-12,
        w_over_mean,
        l1,
        l2,
    })
}

/// w as a function of the crossover t_cross for the tail-Weibull family.
///
/// Heavy-tail points (gamma <= 3) contribute the raw formula value, so a
/// gamma = 1.96 sweep reproduces the negative-trending curve a naive use of
/// the formula produces; rows are in input order.
pub fn tail_weibull_waiting_time_curve(
    m: f64,
    a: f64,
    gamma: f64,
    sweep: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if sweep.is_empty() {
        return Err(CoreError::Domain("empty crossover sweep".into()));
    }
    let mut rows = Vec::with_capacity(sweep.len());
    for &tx in sweep {
        let p = TailWeibullParams::new(m, a, gamma, tx)?;
        let w = match tail_weibull_waiting_time(&p) {
            Ok(r) => r.w,
            Err(CoreError::HeavyTail { raw, .. }) => raw,
            Err(e) => return Err(e),
        };
        rows.push((tx, w));
    }
    Ok(rows)
}

/// w as a function of the truncation t_max for the truncated-ML family
/// (quadrature route).
pub fn ml_waiting_time_curve(beta: f64, t0: f64, sweep: &[f64]) -> Result<Vec<(f64, f64)>> {
    if sweep.is_empty() {
        return Err(CoreError::Domain("empty t_max sweep".into()));
    }
    let mut rows = Vec::with_capacity(sweep.len());
    for &tm in sweep {
        let p = TruncatedMLParams::new(beta, t0, tm)?;
        rows.push((tm, ml_truncated_waiting_time(&p)?.w));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn empirical_basics() {
        let r = empirical_waiting_time(&[5.0, 5.0, 5.0]).unwrap();
        assert!(fabs(r.w - 2.5) < 1e-15);
        let r = empirical_waiting_time(&[1.0, 2.0, 3.0]).unwrap();
        assert!(fabs(r.w - 7.0 / 6.0) < 1e-15);
        assert!(empirical_waiting_time(&[1.0]).is_err());
        assert!(empirical_waiting_time(&[0.0, 0.0]).is_err());
        assert!(empirical_waiting_time(&[1.0, -2.0]).is_err());
    }

    #[test]
    fn weibull_closed_form_values() {
        // frozen: a^(1/m) Gamma(2/m)/Gamma(1/m) at 40-digit precision
        let cases = [
            (0.585, 49.63, 2646.078_638_990_802),
            (0.85, 10.02, 19.613_200_726_942_958),
            (0.99, 16.49, 17.209_884_357_850_822),
            (1.0, 3.5, 3.5),
        ];
        for &(m, a, want) in &cases {
            let w = weibull_waiting_time(&WeibullParams::new(m, a).unwrap())
                .unwrap()
                .w;
            assert!(fabs(w - want) / want < 1e-13, "m={m}: {w} vs {want}");
        }
    }

    #[test]
    fn tail_weibull_sony_values() {
        // frozen from the closed-form moments at 40-digit precision
        let p = TailWeibullParams::new(0.585, 49.63, 4.67, 18000.0).unwrap();
        let r = tail_weibull_waiting_time(&p).unwrap();
        assert!(fabs(r.w - 2736.484_988_888_321) / r.w < 1e-12, "w = {}", r.w);
        assert_eq!(r.diagnostics.len(), 5); // four summands + lambda

        let p = TailWeibullParams::new(0.585, 49.63, 4.67, 23538.3).unwrap();
        let r = tail_weibull_waiting_time(&p).unwrap();
        assert!(fabs(r.w - 2772.389_235_503_292) / r.w < 1e-12, "w = {}", r.w);
    }

    #[test]
    fn tail_weibull_converges_to_weibull() {
        let p = TailWeibullParams::new(0.585, 49.63, 4.67, 1e8).unwrap();
        let w_tail = tail_weibull_waiting_time(&p).unwrap().w;
        let w_pure = weibull_waiting_time(&WeibullParams::new(0.585, 49.63).unwrap())
            .unwrap()
            .w;
        assert!(fabs(w_tail - w_pure) / w_pure < 1e-6);
    }

    #[test]
    fn heavy_tail_rejected_with_raw_value() {
        let p = TailWeibullParams::new(0.70, 6.05, 1.96, 44.9).unwrap();
        match tail_weibull_waiting_time(&p) {
            Err(CoreError::HeavyTail { gamma, raw }) => {
                assert!(fabs(gamma - 1.96) < 1e-15);
                // frozen raw formula value
                assert!(fabs(raw - 0.286_481_751_674_407) < 1e-12, "raw = {raw}");
            }
            other => panic!("expected heavy-tail error, got {other:?}"),
        }
    }

    #[test]
    fn gamma_variance_warning_band() {
        let warned = TailWeibullParams::new(0.585, 49.63, 3.2, 18000.0).unwrap();
        let r = tail_weibull_waiting_time(&warned).unwrap();
        assert!(r.diagnostics.contains_key("warn_gamma_variance"));
        let clean = TailWeibullParams::new(0.585, 49.63, 4.67, 18000.0).unwrap();
        let r = tail_weibull_waiting_time(&clean).unwrap();
        assert!(!r.diagnostics.contains_key("warn_gamma_variance"));
    }

    #[test]
    fn ml_quadrature_frozen_value() {
        let p = TruncatedMLParams::new(0.96, 12.0, 100.0).unwrap();
        let r = ml_truncated_waiting_time(&p).unwrap();
        assert!(fabs(r.w - 13.585_857_516_744_066) / r.w < 1e-6, "w = {}", r.w);
    }

    #[test]
    fn ml_series_matches_quadrature_in_stable_range() {
        // z = t_max/t0 small enough that the alternating series keeps digits
        let p = TruncatedMLParams::new(0.96, 12.0, 100.0).unwrap();
        let series = ml_truncated_waiting_time_series(&p).unwrap();
        assert!(fabs(series.w - 13.585_857_516_744_068) / series.w < 1e-10);
        let quad = ml_truncated_waiting_time(&p).unwrap();
        assert!(fabs(series.w - quad.w) / quad.w < 5e-3);

        let p = TruncatedMLParams::new(1.0, 12.0, 50.0).unwrap();
        let series = ml_truncated_waiting_time_series(&p).unwrap();
        assert!(fabs(series.w - 10.244_384_776_169_847) / series.w < 1e-10);
    }

    #[test]
    fn ml_series_cancels_at_large_truncation() {
        let p = TruncatedMLParams::new(0.96, 12.0, 10_000.0).unwrap();
        assert!(matches!(
            ml_truncated_waiting_time_series(&p),
            Err(CoreError::Numerical { .. })
        ));
    }

    #[test]
    fn ml_exponential_limit() {
        // beta = 1, generous truncation: residual life of an exponential is t0
        let p = TruncatedMLParams::new(1.0, 7.0, 700.0).unwrap();
        let r = ml_truncated_waiting_time(&p).unwrap();
        assert!(fabs(r.w - 7.0) / 7.0 < 5e-3, "w = {}", r.w);
    }

    #[test]
    fn ml_waiting_time_diverges_linearly() {
        let rows = ml_waiting_time_curve(0.5, 12.0, &[1e4, 1e5, 1e6]).unwrap();
        let s1 = (log(rows[1].1) - log(rows[0].1)) / (log(1e5) - log(1e4));
        let s2 = (log(rows[2].1) - log(rows[1].1)) / (log(1e6) - log(1e5));
        assert!(fabs(s1 - 1.0) < 0.05, "slope {s1}");
        assert!(fabs(s2 - 1.0) < 0.05, "slope {s2}");
    }

    #[test]
    fn paradox_flips_at_m_one() {
        let r = inspection_paradox(&WeibullParams::new(1.0, 5.0).unwrap()).unwrap();
        assert!(!r.paradox);
        assert!(fabs(r.w_over_mean - 1.0) < 1e-14);
        assert!(fabs(r.l1 - r.l2) < 1e-13);

        let r = inspection_paradox(&WeibullParams::new(0.585, 49.63).unwrap()).unwrap();
        assert!(r.paradox);
        assert!(fabs(r.w_over_mean - 2.146_804_472_153_047) < 1e-13);

        let r = inspection_paradox(&WeibullParams::new(0.5, 1.0).unwrap()).unwrap();
        assert!(fabs(r.w_over_mean - 3.0) < 1e-13);

        // bisection: the flip point is m = 1
        let mut lo = 0.5;
        let mut hi = 2.0;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let r = inspection_paradox(&WeibullParams::new(mid, 1.0).unwrap()).unwrap();
            if r.paradox {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!(fabs(0.5 * (lo + hi) - 1.0) < 1e-9);
    }

    #[test]
    fn sweep_hump_and_argmax() {
        // Sony set: w(t_cross) has an interior maximum near the analytic
        // optimum ((a/m)(m+gamma-1))^(1/m)
        let n = 551;
        let sweep: Vec<f64> = (0..n)
            .map(|i| 5000.0 + (60000.0 - 5000.0) * i as f64 / (n - 1) as f64)
            .collect();
        let rows = tail_weibull_waiting_time_curve(0.585, 49.63, 4.67, &sweep).unwrap();
        let (argmax, _) = rows
            .iter()
            .fold((0.0, 0.0), |acc, &(tx, w)| if w > acc.1 { (tx, w) } else { acc });
        assert!(
            (23000.0..=24100.0).contains(&argmax),
            "argmax at {argmax}"
        );
        let t_star = crate::fitting::optimal_crossover(0.585, 49.63, 4.67).unwrap();
        let step = sweep[1] - sweep[0];
        assert!(fabs(argmax - t_star) <= step, "argmax {argmax} vs {t_star}");
    }

    #[test]
    fn heavy_tail_sweep_goes_negative() {
        let rows =
            tail_weibull_waiting_time_curve(0.70, 6.05, 1.96, &[44.9, 100.0, 300.0]).unwrap();
        assert!(fabs(rows[1].1 - -0.488_637_480_801_406) < 1e-10, "{:?}", rows[1]);
        assert!(rows[0].1 > 0.0 && rows[1].1 < 0.0);
    }

    #[test]
    fn single_point_sweep_equals_scalar() {
        let p = TailWeibullParams::new(0.585, 49.63, 4.67, 18000.0).unwrap();
        let scalar = tail_weibull_waiting_time(&p).unwrap().w;
        let rows = tail_weibull_waiting_time_curve(0.585, 49.63, 4.67, &[18000.0]).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(fabs(rows[0].1 - scalar) < 1e-12);
        assert!(tail_weibull_waiting_time_curve(1.0, 1.0, 4.0, &[]).is_err());
        let _ = vec![0.0]; // keep alloc vec macro import exercised
    }
}
