use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::ExponentialFamily;
use crate::error::{Error, Result};
use crate::rules::IntervalRule;

/// Two-sided 99% standard normal quantile.
const Z_99: f64 = 2.575_829_303_548_901;
const CHUNK: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    /// 99% normal-approximation half-width.
    pub half_width: f64,
    pub samples: usize,
}

impl McEstimate {
    pub fn covers(&self, value: f64) -> bool {
        (self.estimate - value).abs() <= self.half_width
    }
}

/// Monte-Carlo estimate of `E_θ[δ(Y)]`. Boundary randomization uses
/// auxiliary uniforms. Each chunk of draws has its own ChaCha stream, so the
/// result depends only on `seed`.
pub fn mc_power(
    fam: &ExponentialFamily,
    theta: f64,
    rule: &IntervalRule,
    n_samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    if n_samples < 1000 {
        return Err(Error::Precondition(format!(
            "need at least 1000 samples, got {n_samples}"
        )));
    }
    fam.check_param(theta)?;
    rule.validate()?;
    let chunks = n_samples.div_ceil(CHUNK);
    let rejected: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<u64> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = CHUNK.min(n_samples - c * CHUNK);
            let mut ys = Vec::with_capacity(count);
            fam.sample_into(theta, &mut rng, count, &mut ys)?;
            let mut hits = 0;
            for y in ys {
                let t = fam.statistic(y);
                let reject = if t < rule.ell || t > rule.u {
                    true
                } else if t == rule.ell {
                    rng.random::<f64>() < rule.p_ell
                } else if t == rule.u {
                    rng.random::<f64>() < rule.p_u
                } else {
                    false
                };
                hits += reject as u64;
            }
            Ok(hits)
        })
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .sum();
    let n = n_samples as f64;
    let p = rejected as f64 / n;
    Ok(McEstimate {
        estimate: p,
        half_width: Z_99 * (p * (1.0 - p) / n).sqrt(),
        samples: n_samples,
    })
}
