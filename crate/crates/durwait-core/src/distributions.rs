//! Duration-distribution objects: Weibull, Weibull with a power-law tail,
//! and the truncated Mittag-Leffler distribution, with densities, survival
//! functions, closed-form inverses, sampling and moments.
//!
//! The tail-Weibull density is stored unnormalized, exactly as it enters
//! the waiting-time formula; [`tail_weibull_mass`] supplies the total mass
//! Z for the places (CDF, sampling) that need a legitimate distribution.

use crate::error::{CoreError, Result};
use crate::quadrature;
use crate::specfun::{self, MLSeriesConfig};
use alloc::format;
use libm::{exp, fabs, log, pow};

/// Relative tolerance of the adaptive quadrature used for moments. The
/// Mittag-Leffler series carries f64 rounding noise of a few 1e-7 relative
/// near its cancellation cap, so asking for more just fails to converge.
const QUAD_REL_TOL: f64 = 1e-6;

/// A duration distribution exposing its normalized density, survival
/// function and inverse CDF.
pub trait DurationDistribution {
    /// Normalized probability density at `t`.
    fn pdf(&self, t: f64) -> Result<f64>;
    /// Normalized survival function P(T > t).
    fn survival(&self, t: f64) -> Result<f64>;
    /// Inverse CDF: the duration at cumulative probability `u` in (0,1).
    fn sample_u(&self, u: f64) -> Result<f64>;
}

fn check_unit_open(u: f64, what: &str) -> Result<()> {
    if !(u > 0.0 && u < 1.0) {
        return Err(CoreError::Domain(format!(
            "{what} requires a probability in (0,1), got {u}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Weibull
// ---------------------------------------------------------------------------

/// Weibull duration distribution with density (m t^(m-1) / a) exp(-t^m / a).
///
/// `a` carries units of time^m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeibullParams {
    m: f64,
    a: f64,
}

impl WeibullParams {
    pub fn new(m: f64, a: f64) -> Result<Self> {
        if !(m > 0.0) {
            return Err(CoreError::Domain(format!("shape m must be > 0, got {m}")));
        }
        if !(a > 0.0) {
            return Err(CoreError::Domain(format!("scale a must be > 0, got {a}")));
        }
        Ok(Self { m, a })
    }

    /// Exponential distribution with the given mean (m = 1, a = mean).
    pub fn exponential(mean: f64) -> Result<Self> {
        Self::new(1.0, mean)
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// E(t) = a^(1/m) (1/m) Gamma(1/m).
    pub fn mean(&self) -> f64 {
        let inv_m = 1.0 / self.m;
        exp(inv_m * log(self.a) + specfun::ln_gamma(inv_m).expect("1/m > 0")) * inv_m
    }

    /// E(t^k) = a^(k/m) (k/m) Gamma(k/m).
    pub fn raw_moment(&self, k: u32) -> f64 {
        let r = k as f64 / self.m;
        exp(r * log(self.a) + specfun::ln_gamma(r).expect("k/m > 0")) * r
    }
}

/// Weibull density; t = 0 is a domain error when m < 1 (the density
/// diverges there).
pub fn weibull_pdf(t: f64, p: &WeibullParams) -> Result<f64> {
    if t < 0.0 || (t == 0.0 && p.m < 1.0) {
        return Err(CoreError::Domain(format!(
            "weibull_pdf requires t > 0 for m < 1 (got t = {t}, m = {})",
            p.m
        )));
    }
    if t == 0.0 {
        return Ok(if p.m == 1.0 { 1.0 / p.a } else { 0.0 });
    }
    Ok(p.m * pow(t, p.m - 1.0) / p.a * exp(-pow(t, p.m) / p.a))
}

/// Weibull survival exp(-t^m / a).
pub fn weibull_survival(t: f64, p: &WeibullParams) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(CoreError::Domain(format!("t must be >= 0, got {t}")));
    }
    Ok(exp(-pow(t, p.m) / p.a))
}

/// Inverse of the survival function: the t with exp(-t^m / a) = u.
pub fn weibull_quantile(u: f64, p: &WeibullParams) -> Result<f64> {
    check_unit_open(u, "weibull_quantile")?;
    Ok(pow(-p.a * log(u), 1.0 / p.m))
}

impl DurationDistribution for WeibullParams {
    fn pdf(&self, t: f64) -> Result<f64> {
        weibull_pdf(t, self)
    }

    fn survival(&self, t: f64) -> Result<f64> {
        weibull_survival(t, self)
    }

    fn sample_u(&self, u: f64) -> Result<f64> {
        // CDF inverse == survival inverse at 1-u
        check_unit_open(u, "weibull sample")?;
        weibull_quantile(1.0 - u, self)
    }
}

// ---------------------------------------------------------------------------
// Weibull with a power-law tail
// ---------------------------------------------------------------------------

/// Piecewise duration density: Weibull body below the crossover `t_cross`,
/// power-law tail lambda * t^(-gamma) above it, continuous at the crossover.
///
/// The amplitude lambda is derived from continuity:
/// lambda = (m/a) t_cross^(m+gamma-1) exp(-t_cross^m / a).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailWeibullParams {
    m: f64,
    a: f64,
    gamma: f64,
    t_cross: f64,
    lambda: f64,
}

impl TailWeibullParams {
    pub fn new(m: f64, a: f64, gamma: f64, t_cross: f64) -> Result<Self> {
        let body = WeibullParams::new(m, a)?;
        if !(gamma > 1.0) {
            return Err(CoreError::HeavyTail {
                gamma,
                raw: f64::NAN,
            });
        }
        if !(t_cross > 0.0) {
            return Err(CoreError::Domain(format!(
                "t_cross must be > 0, got {t_cross}"
            )));
        }
        let lambda = crate::fitting::lambda_amplitude(t_cross, m, a, gamma);
        let _ = body;
        Ok(Self {
            m,
            a,
            gamma,
            t_cross,
            lambda,
        })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn t_cross(&self) -> f64 {
        self.t_cross
    }

    /// Tail amplitude fixed by continuity at the crossover.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn body(&self) -> WeibullParams {
        WeibullParams { m: self.m, a: self.a }
    }

    /// Unnormalized mass of the Weibull body, 1 - exp(-t_cross^m / a).
    pub fn body_mass(&self) -> f64 {
        1.0 - exp(-pow(self.t_cross, self.m) / self.a)
    }

    /// Unnormalized mass of the power-law tail, lambda t_cross^(1-gamma)/(gamma-1).
    pub fn tail_mass(&self) -> f64 {
        self.lambda * pow(self.t_cross, 1.0 - self.gamma) / (self.gamma - 1.0)
    }

    /// Unnormalized k-th moment restricted to [0, t_max].
    ///
    /// Body contribution through the incomplete gamma function, tail
    /// contribution in closed form.
    pub fn truncated_raw_moment(&self, k: u32, t_max: f64) -> Result<f64> {
        if !(t_max > 0.0) {
            return Err(CoreError::Domain(format!("t_max must be > 0, got {t_max}")));
        }
        let kf = k as f64;
        let body_top = if t_max < self.t_cross { t_max } else { self.t_cross };
        let r = kf / self.m;
        let body = exp(r * log(self.a) + specfun::ln_gamma(r)?)
            * r
            * specfun::reg_lower_incomplete_gamma(r + 1.0, pow(body_top, self.m) / self.a)?;
        if t_max <= self.t_cross {
            return Ok(body);
        }
        // integral of lambda t^(k-gamma) over [t_cross, t_max]
        let e = kf - self.gamma + 1.0;
        let tail = if fabs(e) < 1e-12 {
            self.lambda * log(t_max / self.t_cross)
        } else {
            self.lambda * (pow(t_max, e) - pow(self.t_cross, e)) / e
        };
        Ok(body + tail)
    }
}

/// Unnormalized piecewise density. The value exactly at t_cross is the
/// shared (equal) branch value.
pub fn tail_weibull_pdf(t: f64, p: &TailWeibullParams) -> Result<f64> {
    if t < p.t_cross {
        weibull_pdf(t, &p.body())
    } else {
        if !(t > 0.0) {
            return Err(CoreError::Domain(format!("t must be > 0, got {t}")));
        }
        Ok(p.lambda * pow(t, -p.gamma))
    }
}

/// Total unnormalized mass Z of the piecewise density.
///
/// Z -> 1 as t_cross -> infinity (pure Weibull); gamma <= 1 would make the
/// tail non-normalizable and is rejected at construction.
pub fn tail_weibull_mass(p: &TailWeibullParams) -> f64 {
    p.body_mass() + p.tail_mass()
}

/// Inverse of the normalized piecewise CDF.
pub fn tail_weibull_sample(p: &TailWeibullParams, u: f64) -> Result<f64> {
    check_unit_open(u, "tail_weibull_sample")?;
    let z = tail_weibull_mass(p);
    let target = u * z;
    let body = p.body_mass();
    if target <= body {
        // invert 1 - exp(-t^m/a) = target
        Ok(pow(-p.a * log(1.0 - target), 1.0 / p.m))
    } else {
        // invert lambda (t_cross^(1-g) - t^(1-g))/(g-1) = target - body
        let g1 = p.gamma - 1.0;
        let rem = (target - body) * g1 / p.lambda;
        let base = pow(p.t_cross, -g1) - rem;
        Ok(pow(base, -1.0 / g1))
    }
}

impl DurationDistribution for TailWeibullParams {
    fn pdf(&self, t: f64) -> Result<f64> {
        Ok(tail_weibull_pdf(t, self)? / tail_weibull_mass(self))
    }

    fn survival(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(CoreError::Domain(format!("t must be >= 0, got {t}")));
        }
        let z = tail_weibull_mass(self);
        let cum = if t <= self.t_cross {
            1.0 - exp(-pow(t, self.m) / self.a)
        } else {
            let g1 = self.gamma - 1.0;
            self.body_mass() + self.lambda * (pow(self.t_cross, -g1) - pow(t, -g1)) / g1
        };
        Ok(((z - cum) / z).clamp(0.0, 1.0))
    }

    fn sample_u(&self, u: f64) -> Result<f64> {
        tail_weibull_sample(self, u)
    }
}

// ---------------------------------------------------------------------------
// Truncated Mittag-Leffler
// ---------------------------------------------------------------------------

/// Mittag-Leffler duration distribution truncated at `t_max` and normalized
/// to Z = 1 - E_beta(-(t_max/t0)^beta).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedMLParams {
    beta: f64,
    t0: f64,
    t_max: f64,
    series: MLSeriesConfig,
}

impl TruncatedMLParams {
    pub fn new(beta: f64, t0: f64, t_max: f64) -> Result<Self> {
        Self::with_series(beta, t0, t_max, MLSeriesConfig::for_shape(beta))
    }

    pub fn with_series(beta: f64, t0: f64, t_max: f64, series: MLSeriesConfig) -> Result<Self> {
        if !(t_max > 0.0) {
            return Err(CoreError::Domain(format!("t_max must be > 0, got {t_max}")));
        }
        // validates beta and t0
        specfun::ml_survival(0.0, t0, beta, &series)?;
        Ok(Self {
            beta,
            t0,
            t_max,
            series,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn series(&self) -> &MLSeriesConfig {
        &self.series
    }

    /// Normalization mass Z = 1 - E_beta(-(t_max/t0)^beta), in (0, 1).
    pub fn normalization(&self) -> Result<f64> {
        Ok(1.0 - specfun::ml_survival(self.t_max, self.t0, self.beta, &self.series)?)
    }
}

/// k-th moment (k = 1 or 2) of the truncated, normalized distribution,
/// by adaptive quadrature of t^k P_ML(t) over [0, t_max].
pub fn truncated_ml_moment(k: u32, p: &TruncatedMLParams) -> Result<f64> {
    if k != 1 && k != 2 {
        return Err(CoreError::Domain(format!("moment order must be 1 or 2, got {k}")));
    }
    let kf = k as f64;
    let f = |t: f64| match specfun::ml_pdf(t, p.t0, p.beta, &p.series) {
        Ok(v) => pow(t, kf) * v,
        Err(_) => f64::NAN,
    };
    // split at the series/asymptotic switch: the tiny branch jump there
    // otherwise stalls the panel refinement
    let split = p.t0 * p.series.switch_threshold;
    let raw = if split < p.t_max {
        quadrature::integrate(f, 0.0, split, QUAD_REL_TOL)?
            + quadrature::integrate(f, split, p.t_max, QUAD_REL_TOL)?
    } else {
        quadrature::integrate(f, 0.0, p.t_max, QUAD_REL_TOL)?
    };
    Ok(raw / p.normalization()?)
}

impl DurationDistribution for TruncatedMLParams {
    fn pdf(&self, t: f64) -> Result<f64> {
        if t > self.t_max {
            return Ok(0.0);
        }
        Ok(specfun::ml_pdf(t, self.t0, self.beta, &self.series)? / self.normalization()?)
    }

    fn survival(&self, t: f64) -> Result<f64> {
        if t >= self.t_max {
            return Ok(0.0);
        }
        let s = specfun::ml_survival(t, self.t0, self.beta, &self.series)?;
        let s_max = specfun::ml_survival(self.t_max, self.t0, self.beta, &self.series)?;
        Ok(((s - s_max) / (1.0 - s_max)).clamp(0.0, 1.0))
    }

    fn sample_u(&self, u: f64) -> Result<f64> {
        // bisection on the monotone survival function
        check_unit_open(u, "truncated ML sample")?;
        let target = 1.0 - u; // normalized survival level
        let mut lo = 0.0;
        let mut hi = self.t_max;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.survival(mid)? > target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-14 * self.t_max {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

// ---------------------------------------------------------------------------
// Mittag-Leffler approximant (stretched-exponential body + power-law tail)
// ---------------------------------------------------------------------------

/// Effective density approximating the Mittag-Leffler distribution:
/// stretched-exponential body P_S(t) up to the crossover, then the matched
/// power-law tail t_cross^(beta+1) P_S(t_cross) t^(-1-beta).
///
/// P_S is the Weibull density with shape beta and scale t0^beta Gamma(1+beta)
/// (the small-argument asymptotic of the Mittag-Leffler survival function),
/// so the approximant is a tail-Weibull with gamma = 1 + beta. Unlike the
/// survival function itself, it is a legitimate density for any beta > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLApproximantParams {
    beta: f64,
    t0: f64,
    inner: TailWeibullParams,
}

impl MLApproximantParams {
    pub fn new(beta: f64, t0: f64, t_cross: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(CoreError::Domain(format!("beta must be > 0, got {beta}")));
        }
        if !(t0 > 0.0) {
            return Err(CoreError::Domain(format!("t0 must be > 0, got {t0}")));
        }
        let scale = pow(t0, beta) * exp(specfun::ln_gamma(1.0 + beta)?);
        let inner = TailWeibullParams::new(beta, scale, 1.0 + beta, t_cross)?;
        Ok(Self { beta, t0, inner })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    /// The equivalent piecewise-Weibull parameter record.
    pub fn as_tail_weibull(&self) -> &TailWeibullParams {
        &self.inner
    }

    /// Unnormalized density.
    pub fn pdf(&self, t: f64) -> Result<f64> {
        tail_weibull_pdf(t, &self.inner)
    }

    /// Waiting time E(t^2)/2E(t) of the approximant truncated at t_max.
    pub fn truncated_waiting_time(&self, t_max: f64) -> Result<f64> {
        let m1 = self.inner.truncated_raw_moment(1, t_max)?;
        let m2 = self.inner.truncated_raw_moment(2, t_max)?;
        Ok(m2 / (2.0 * m1))
    }
}
