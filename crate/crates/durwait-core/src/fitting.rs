//! Parameter estimation from duration samples: double-log ("Weibull paper")
//! regression for (m, a), log-log tail regression for the power exponent
//! gamma, and the crossover diagnostics (D-function root, tail-amplitude
//! argmax) that locate the optimal Weibull/power-law crossover.

use crate::error::{CoreError, Result};
use alloc::format;
use alloc::vec::Vec;
use libm::{exp, log, pow, sqrt};

/// Ordinary least squares y = slope x + intercept.
struct LineFit {
    slope: f64,
    intercept: f64,
    r_squared: f64,
    slope_stderr: f64,
}

fn least_squares(points: &[(f64, f64)]) -> Result<LineFit> {
    let n = points.len();
    if n < 2 {
        return Err(CoreError::Fit(format!("need at least 2 points, got {n}")));
    }
    let nf = n as f64;
    let (mut sx, mut sy) = (0.0, 0.0);
    for &(x, y) in points {
        sx += x;
        sy += y;
    }
    let (mx, my) = (sx / nf, sy / nf);
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return Err(CoreError::Fit("all abscissae identical".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res = (syy - slope * sxy).max(0.0);
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    let slope_stderr = if n > 2 {
        sqrt(ss_res / (nf - 2.0) / sxx)
    } else {
        0.0
    };
    Ok(LineFit {
        slope,
        intercept,
        r_squared,
        slope_stderr,
    })
}

/// Empirical survival S(t) = fraction of durations strictly greater than t,
/// evaluated at the sorted unique sample values. The largest value maps to
/// S = 0.
pub fn empirical_survival(samples: &[f64]) -> Result<Vec<(f64, f64)>> {
    if samples.len() < 2 {
        return Err(CoreError::Domain(format!(
            "need at least 2 samples, got {}",
            samples.len()
        )));
    }
    let mut sorted: Vec<f64> = samples.to_vec();
    if sorted.iter().any(|v| !v.is_finite()) {
        return Err(CoreError::Domain("non-finite duration".into()));
    }
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut i = 0usize;
    while i < sorted.len() {
        let t = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == t {
            j += 1;
        }
        out.push((t, (sorted.len() - j) as f64 / n));
        i = j;
    }
    Ok(out)
}

/// Double-log regression result: survival ln(-ln S) = m ln t - ln a.
#[derive(Debug, Clone)]
pub struct WeibullPaperFit {
    pub m: f64,
    pub a: f64,
    pub r_squared: f64,
    /// Upper time limit of the fitted window.
    pub t_cut: f64,
    pub n_used: usize,
    /// The transformed points (ln t, ln(-ln S)) that entered the regression.
    pub points: Vec<(f64, f64)>,
}

/// Fit (m, a) from explicit (t, S(t)) pairs with t < t_cut and 0 < S < 1.
pub fn weibull_paper_fit_points(survival: &[(f64, f64)], t_cut: f64) -> Result<WeibullPaperFit> {
    let transformed: Vec<(f64, f64)> = survival
        .iter()
        .filter(|&&(t, s)| t > 0.0 && t < t_cut && s > 0.0 && s < 1.0)
        .map(|&(t, s)| (log(t), log(-log(s))))
        .collect();
    if transformed.len() < 3 {
        return Err(CoreError::Fit(format!(
            "weibull paper fit needs >= 3 usable points below t_cut={t_cut}, got {}",
            transformed.len()
        )));
    }
    let fit = least_squares(&transformed)?;
    Ok(WeibullPaperFit {
        m: fit.slope,
        a: exp(-fit.intercept),
        r_squared: fit.r_squared,
        t_cut,
        n_used: transformed.len(),
        points: transformed,
    })
}

/// Weibull-paper fit from raw durations via the empirical survival function.
pub fn weibull_paper_fit(samples: &[f64], t_cut: f64) -> Result<WeibullPaperFit> {
    weibull_paper_fit_points(&empirical_survival(samples)?, t_cut)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFit {
    pub gamma: f64,
    pub stderr: f64,
    pub n_used: usize,
}

/// Tail-exponent fit from (t, S(t)) pairs: the log-log survival slope above
/// t_min is 1 - gamma.
pub fn tail_exponent_fit_points(survival: &[(f64, f64)], t_min: f64) -> Result<TailFit> {
    let pts: Vec<(f64, f64)> = survival
        .iter()
        .filter(|&&(t, s)| t > t_min && s > 0.0)
        .map(|&(t, s)| (log(t), log(s)))
        .collect();
    if pts.len() < 10 {
        return Err(CoreError::Fit(format!(
            "tail fit needs >= 10 points above t_min={t_min}, got {}",
            pts.len()
        )));
    }
    let fit = least_squares(&pts)?;
    Ok(TailFit {
        gamma: 1.0 - fit.slope,
        stderr: fit.slope_stderr,
        n_used: pts.len(),
    })
}

pub fn tail_exponent_fit(samples: &[f64], t_min: f64) -> Result<TailFit> {
    tail_exponent_fit_points(&empirical_survival(samples)?, t_min)
}

/// Tail amplitude fixed by density continuity at the crossover:
/// lambda = (m/a) t_cross^(m+gamma-1) exp(-t_cross^m / a).
pub fn lambda_amplitude(t_cross: f64, m: f64, a: f64, gamma: f64) -> f64 {
    m / a * pow(t_cross, m + gamma - 1.0) * exp(-pow(t_cross, m) / a)
}

/// The crossover that maximizes the tail amplitude (equivalently minimizes
/// the matching error): t_star = ((a/m)(m + gamma - 1))^(1/m).
pub fn optimal_crossover(m: f64, a: f64, gamma: f64) -> Result<f64> {
    if !(m > 0.0 && a > 0.0) {
        return Err(CoreError::Domain(format!(
            "need m > 0 and a > 0, got m={m}, a={a}"
        )));
    }
    let s = m + gamma - 1.0;
    if !(s > 0.0) {
        return Err(CoreError::Domain(format!(
            "m + gamma - 1 must be > 0, got {s}"
        )));
    }
    Ok(pow(a / m * s, 1.0 / m))
}

/// D(t_cross) = (m/a) t_cross^m - gamma - m + 1; its unique root on (0,inf)
/// is the optimal crossover, with D < 0 below it and D > 0 above.
pub fn d_function(t_cross: f64, m: f64, a: f64, gamma: f64) -> f64 {
    m / a * pow(t_cross, m) - gamma - m + 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondDerivativeSign {
    MinimumConfirmed,
    NotConfirmed,
}

/// Numerical corroboration of the crossover formula over a sweep:
/// D's sign change and lambda's argmax must both land on t_star.
#[derive(Debug, Clone)]
pub struct CrossoverDiagnostics {
    pub t_star: f64,
    pub d_values: Vec<(f64, f64)>,
    pub lambda_values: Vec<(f64, f64)>,
    /// Confirmed when lambda is concave at t_star (a maximum of the
    /// amplitude is a minimum of the matching error).
    pub second_derivative_sign: SecondDerivativeSign,
}

pub fn crossover_diagnostics(
    m: f64,
    a: f64,
    gamma: f64,
    sweep: &[f64],
) -> Result<CrossoverDiagnostics> {
    if sweep.is_empty() {
        return Err(CoreError::Domain("empty crossover sweep".into()));
    }
    if sweep.iter().any(|&t| !(t > 0.0)) {
        return Err(CoreError::Domain("sweep values must be > 0".into()));
    }
    let t_star = optimal_crossover(m, a, gamma)?;
    let d_values: Vec<(f64, f64)> = sweep
        .iter()
        .map(|&t| (t, d_function(t, m, a, gamma)))
        .collect();
    let lambda_values: Vec<(f64, f64)> = sweep
        .iter()
        .map(|&t| (t, lambda_amplitude(t, m, a, gamma)))
        .collect();
    let h = 1e-4 * t_star;
    let lam = |t: f64| lambda_amplitude(t, m, a, gamma);
    let second = (lam(t_star + h) - 2.0 * lam(t_star) + lam(t_star - h)) / (h * h);
    let second_derivative_sign = if second < 0.0 {
        SecondDerivativeSign::MinimumConfirmed
    } else {
        SecondDerivativeSign::NotConfirmed
    };
    Ok(CrossoverDiagnostics {
        t_star,
        d_values,
        lambda_values,
        second_derivative_sign,
    })
}
