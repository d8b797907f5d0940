//! Monte Carlo renewal machinery: distribution parsing, event simulation
//! through inverse-CDF sampling, and residual-life probing.

use crate::error::{PipelineError, Result};
use durwait_core::distributions::{
    DurationDistribution, TailWeibullParams, TruncatedMLParams, WeibullParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A parsed `--dist` argument.
#[derive(Debug, Clone)]
pub enum DistSpec {
    Weibull(WeibullParams),
    TailWeibull(TailWeibullParams),
    TruncatedMl(TruncatedMLParams),
}

impl DistSpec {
    /// Accepted forms:
    ///   weibull:<m>,<a>
    ///   tailweibull:<m>,<a>,<gamma>,<t_cross>
    ///   ml:<beta>,<t0>,<t_max>
    pub fn parse(s: &str) -> Result<Self> {
        let (name, rest) = s
            .split_once(':')
            .ok_or_else(|| PipelineError::data(format!("bad dist spec {s:?}, expected name:args")))?;
        let args: Vec<f64> = rest
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| PipelineError::data(format!("bad number {p:?} in dist spec")))
            })
            .collect::<Result<_>>()?;
        let want = |n: usize| -> Result<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(PipelineError::data(format!(
                    "dist {name} takes {n} parameters, got {}",
                    args.len()
                )))
            }
        };
        match name {
            "weibull" => {
                want(2)?;
                Ok(DistSpec::Weibull(WeibullParams::new(args[0], args[1])?))
            }
            "tailweibull" => {
                want(4)?;
                Ok(DistSpec::TailWeibull(TailWeibullParams::new(
                    args[0], args[1], args[2], args[3],
                )?))
            }
            "ml" => {
                want(3)?;
                Ok(DistSpec::TruncatedMl(TruncatedMLParams::new(
                    args[0], args[1], args[2],
                )?))
            }
            other => Err(PipelineError::data(format!("unknown distribution {other:?}"))),
        }
    }

    pub fn as_dist(&self) -> &dyn DurationDistribution {
        match self {
            DistSpec::Weibull(p) => p,
            DistSpec::TailWeibull(p) => p,
            DistSpec::TruncatedMl(p) => p,
        }
    }
}

/// Seed for parallel chunk `k` of a run seeded with `seed` (splitmix64 of
/// the pair, so chunk streams never overlap the root stream).
pub fn derive_chunk_seed(seed: u64, chunk: u64) -> u64 {
    let mut z = seed ^ chunk.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn unit_open(rng: &mut ChaCha8Rng) -> f64 {
    // (0, 1): reject the endpoints the generator can produce
    loop {
        let u: f64 = rng.r#gen();
        if u > 0.0 && u < 1.0 {
            return u;
        }
    }
}

/// Event times T_n = sum of n i.i.d. durations; deterministic per seed.
pub fn simulate_renewal(
    dist: &dyn DurationDistribution,
    n_events: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if n_events < 1 {
        return Err(PipelineError::data("n_events must be >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = 0.0;
    let mut out = Vec::with_capacity(n_events);
    for _ in 0..n_events {
        t += dist.sample_u(unit_open(&mut rng))?;
        out.push(t);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
pub struct ResidualLife {
    pub mean_residual: f64,
    pub stderr: f64,
    pub n_probes: usize,
}

/// Drop uniform inspection times on [first event, last event] and measure
/// the time to the next event at each.
pub fn residual_life_probe(event_times: &[f64], n_probes: usize, seed: u64) -> Result<ResidualLife> {
    if event_times.len() < 2 {
        return Err(PipelineError::data("need at least 2 events to probe"));
    }
    if n_probes < 2 {
        return Err(PipelineError::data("need at least 2 probes"));
    }
    let lo = event_times[0];
    let hi = *event_times.last().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_chunk_seed(seed, 1));
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n_probes {
        let probe = lo + (hi - lo) * unit_open(&mut rng);
        // first event strictly after the probe
        let idx = event_times.partition_point(|&t| t <= probe);
        let idx = idx.min(event_times.len() - 1);
        let r = event_times[idx] - probe;
        sum += r;
        sum_sq += r * r;
    }
    let n = n_probes as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    Ok(ResidualLife {
        mean_residual: mean,
        stderr: (var / n).sqrt(),
        n_probes,
    })
}
