//! A batch-constant law under which the fitness profile keeps oscillating.
//!
//! `H` has `P(H = i) = 2^-i` and the levels are `(n_k, n_{k+1}]` with
//! `n_k = k(k+1)/2`. On level `k` the batch size is
//! `g_k = (k+1)! * tau_0 * ... * tau_k`, where `tau_k` is large enough that
//! a level-`k` draw arrives within `tau_k` cycles with probability at least
//! `1 - 2^-k` given it falls inside its level. Each batch is so much larger
//! than everything born before it that the latest batch dominates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::increments::{DiscreteLaw, FitnessBatch, IncrementLaw};
use crate::measure::{BorelSet, FitnessMeasure};
use crate::population::Population;

use super::{CycleSampler, Engine};

/// Largest depth whose batch sizes fit in 64-bit counts.
pub const MAX_FEASIBLE_K: u32 = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleLaw {
    pub law: IncrementLaw,
    /// `tau_0, ..., tau_{k_max}`.
    pub tau: Vec<u64>,
    /// Level thresholds `n_0, ..., n_{k_max + 1}`.
    pub thresholds: Vec<u64>,
    /// Batch size per level.
    pub batch_sizes: Vec<u64>,
}

impl CounterexampleLaw {
    /// Batch size for `H = h`. Draws above `n_{k_max + 1}` take the top level.
    pub fn g(&self, h: u64) -> u64 {
        let level = self.thresholds[1..].partition_point(|&t| t < h).min(self.batch_sizes.len() - 1);
        self.batch_sizes[level]
    }
}

fn threshold(k: u64) -> u64 {
    k * (k + 1) / 2
}

/// Smallest `t` with `(1 - 2^-n_k)^t <= 1 / (2^{k+1} - 1)`.
fn tau_bound(k: u32) -> u64 {
    if k == 0 {
        return 1;
    }
    let miss = -(-(2f64.powi(-(threshold(u64::from(k)) as i32)))).ln_1p();
    ((2f64.powi(k as i32 + 1) - 1.0).ln() / miss).ceil() as u64
}

pub fn build_counterexample_law(k_max: u32) -> Result<CounterexampleLaw> {
    if k_max == 0 {
        return Err(Error::Argument("k_max must be at least 1".into()));
    }
    let mut tau = Vec::with_capacity(k_max as usize + 1);
    let mut batch_sizes = Vec::with_capacity(k_max as usize + 1);
    let (mut product, mut factorial) = (1u64, 1u64);
    for k in 0..=k_max {
        let t = tau_bound(k).max(tau.last().copied().unwrap_or(1));
        tau.push(t);
        let overflow = || Error::Overflow { max_feasible: k - 1 };
        factorial = factorial.checked_mul(u64::from(k) + 1).ok_or_else(overflow)?;
        product = product.checked_mul(t).ok_or_else(overflow)?;
        batch_sizes.push(factorial.checked_mul(product).ok_or_else(overflow)?);
    }
    let thresholds: Vec<u64> = (0..=u64::from(k_max) + 1).map(threshold).collect();
    let k_top = k_max as usize;
    let rows = (0..=k_top)
        .map(|k| {
            let lo = 2f64.powi(-(thresholds[k] as i32));
            let p = if k == k_top { lo } else { lo - 2f64.powi(-(thresholds[k + 1] as i32)) };
            (batch_sizes[k], p)
        })
        .collect();
    let law = IncrementLaw::product(DiscreteLaw::table(rows)?, DiscreteLaw::Deterministic(1))?
        .with_batch(FitnessBatch::Constant);
    Ok(CounterexampleLaw { law, tau, thresholds, batch_sizes })
}

/// What one demonstration run showed for `Z_n(A) / Z_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DemoOutcome {
    pub seed: u64,
    pub max_ratio: f64,
    pub max_at: u64,
    /// Smallest ratio after `max_at`.
    pub later_min_ratio: f64,
}

/// Runs the counterexample law with uniform fitness once per seed and
/// tracks the share of the population inside `set` from step `burn_in` on.
pub fn counterexample_demo(
    k_max: u32,
    set: &BorelSet,
    horizon: u64,
    burn_in: u64,
    seeds: &[u64],
) -> Result<Vec<DemoOutcome>> {
    let ce = build_counterexample_law(k_max)?;
    let m = FitnessMeasure::uniform();
    let observed = [super::Observable::new("a", set.clone())];
    seeds
        .par_iter()
        .map(|&seed| {
            let mut engine = Engine::new(Population::new(), CycleSampler::new(&m, &ce.law, seed), &observed);
            let mut out = DemoOutcome { seed, max_ratio: 0.0, max_at: 0, later_min_ratio: 1.0 };
            while engine.n() < horizon {
                engine.step()?;
                let total = engine.population().total();
                if total == 0 || engine.n() < burn_in {
                    continue;
                }
                let ratio = engine.count(0) as f64 / total as f64;
                if ratio > out.max_ratio {
                    out.max_ratio = ratio;
                    out.max_at = engine.n();
                    out.later_min_ratio = ratio;
                } else {
                    out.later_min_ratio = out.later_min_ratio.min(ratio);
                }
            }
            Ok(out)
        })
        .collect()
}
