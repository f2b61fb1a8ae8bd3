use crate::error::{Error, Result};
use crate::increments::IncrementLaw;
use crate::measure::{BorelSet, FitnessMeasure};

use super::{Cycle, CycleSampler};

/// `[0, f]` when `closed`, otherwise `[0, f)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeftInterval {
    pub f: f64,
    pub closed: bool,
}

impl LeftInterval {
    pub fn set(&self) -> Result<BorelSet> {
        BorelSet::left(self.f, self.closed)
    }
}

/// The even-time count of a left interval as a reflected walk.
///
/// `queue[n]` is `Z_{2n}(I)`, and `walk[n] = S_n` is the partial sum of
/// `X~_k - Y_k` with `X~_k` the births of cycle `k` that land in `I`.
#[derive(Debug, Clone, PartialEq)]
pub struct QueueTrace {
    pub queue: Vec<u64>,
    pub walk: Vec<i64>,
}

impl QueueTrace {
    /// Whether `queue[n] == walk[n] - min_{i <= n} walk[i]` for every `n`.
    pub fn reflection_holds(&self) -> bool {
        let mut min = i64::MAX;
        self.queue.iter().zip(&self.walk).all(|(&q, &s)| {
            min = min.min(s);
            i128::from(q) == i128::from(s) - i128::from(min)
        })
    }
}

/// Lindley recursion `Q <- max(0, Q + X~ - Y)` on a cycle stream.
pub fn queue_from_cycles<'a>(set: &BorelSet, cycles: impl IntoIterator<Item = &'a Cycle>) -> QueueTrace {
    let mut queue = vec![0u64];
    let mut walk = vec![0i64];
    let (mut q, mut s) = (0u64, 0i64);
    for c in cycles {
        let inside = c.births_in(set);
        q = (q + inside).saturating_sub(c.y);
        s += inside as i64 - c.y as i64;
        queue.push(q);
        walk.push(s);
    }
    QueueTrace { queue, walk }
}

/// Reduced queue for `I` over `horizon` steps, drawn from the same stream a
/// population run with `seed` would consume.
pub fn run_queue(
    m: &FitnessMeasure,
    law: &IncrementLaw,
    interval: LeftInterval,
    horizon: u64,
    seed: u64,
) -> Result<QueueTrace> {
    let set = interval.set()?;
    if m.mass(&set) <= 0.0 {
        return Err(Error::DegenerateInterval);
    }
    let mut sampler = CycleSampler::new(m, law, seed);
    let cycles: Vec<Cycle> = (0..horizon / 2).map(|_| sampler.draw()).collect();
    Ok(queue_from_cycles(&set, &cycles))
}
