use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::increments::IncrementLaw;
use crate::measure::{BorelSet, FitnessMeasure};
use crate::population::Population;

use super::distance::sup_distance;
use super::{run_with_seed, CycleSampler, Engine, Observable, SimConfig, TrajectoryRecord};

/// Caps the worker count of replicated runs when set to a positive integer.
pub const THREADS_ENV: &str = "FITNESS_EVO_THREADS";

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of replica `r` under master seed `seed`.
pub fn replica_seed(seed: u64, r: u64) -> u64 {
    splitmix64(seed.wrapping_add(r))
}

fn in_pool<T: Send>(work: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).filter(|&n| n > 0);
    match threads.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(work),
        None => work(),
    }
}

/// Runs `cfg.replicas` independent replicas in parallel.
pub fn run_replicas(cfg: &SimConfig) -> Result<Vec<TrajectoryRecord>> {
    cfg.validate()?;
    let seeds: Vec<u64> = (0..cfg.replicas as u64).map(|r| replica_seed(cfg.seed, r)).collect();
    run_replicas_with_seeds(cfg, &seeds)
}

/// One replica per explicit seed, in seed order.
pub fn run_replicas_with_seeds(cfg: &SimConfig, seeds: &[u64]) -> Result<Vec<TrajectoryRecord>> {
    in_pool(|| seeds.par_iter().map(|&s| run_with_seed(cfg, s)).collect())
}

/// Replicates `cfg` and aggregates the trajectories.
pub fn replicate(cfg: &SimConfig) -> Result<Aggregate> {
    let records = run_replicas(cfg)?;
    Ok(aggregate(&records, &cfg.measure, &cfg.law))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesStats {
    pub mean: Vec<f64>,
    /// Sample standard deviation; absent with fewer than two replicas.
    pub std: Option<Vec<f64>>,
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarStats {
    pub count: usize,
    pub mean: f64,
    pub std: Option<f64>,
    pub min: f64,
    pub max: f64,
}

impl ScalarStats {
    pub fn from_values(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = (values.len() > 1)
            .then(|| (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt());
        Some(ScalarStats {
            count: values.len(),
            mean,
            std,
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableStats {
    pub name: String,
    pub z: SeriesStats,
    pub killed: SeriesStats,
    pub empty_epochs: SeriesStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub replicas: usize,
    pub seeds: Vec<u64>,
    pub steps: Vec<u64>,
    pub z: SeriesStats,
    pub events: SeriesStats,
    pub observables: Vec<ObservableStats>,
    /// Kolmogorov distance of the final population to the limit shape, over
    /// the replicas where both are defined.
    pub final_sup_distance: Option<ScalarStats>,
    pub zeta_truncation: Option<u64>,
}

fn series_stats<'a>(columns: impl Fn(&'a TrajectoryRecord) -> &'a [u64], records: &'a [TrajectoryRecord]) -> SeriesStats {
    let len = records.first().map_or(0, |r| columns(r).len());
    let mut out = SeriesStats {
        mean: Vec::with_capacity(len),
        std: (records.len() > 1).then(|| Vec::with_capacity(len)),
        min: Vec::with_capacity(len),
        max: Vec::with_capacity(len),
    };
    let mut column = Vec::with_capacity(records.len());
    for i in 0..len {
        column.clear();
        column.extend(records.iter().map(|r| columns(r)[i] as f64));
        let s = ScalarStats::from_values(&column).expect("at least one replica");
        out.mean.push(s.mean);
        if let (Some(v), Some(sd)) = (out.std.as_mut(), s.std) {
            v.push(sd);
        }
        out.min.push(s.min);
        out.max.push(s.max);
    }
    out
}

/// Per-step mean, spread and range over replicas sharing one schedule.
pub fn aggregate(records: &[TrajectoryRecord], m: &FitnessMeasure, law: &IncrementLaw) -> Aggregate {
    let first = records.first();
    let names: Vec<String> = first.map(|r| r.observables.iter().map(|o| o.name.clone()).collect()).unwrap_or_default();
    let observables = names
        .iter()
        .enumerate()
        .map(|(i, name)| ObservableStats {
            name: name.clone(),
            z: series_stats(|r| &r.observables[i].z, records),
            killed: series_stats(|r| &r.observables[i].killed, records),
            empty_epochs: series_stats(|r| &r.observables[i].empty_epochs, records),
        })
        .collect();
    let distances: Vec<f64> = records
        .iter()
        .filter_map(|r| {
            let pop = Population::from_snapshot(&r.final_state).ok()?;
            let cdf = pop.empirical_cdf().ok()?;
            sup_distance(&cdf, m, law).ok()
        })
        .collect();
    Aggregate {
        replicas: records.len(),
        seeds: records.iter().map(|r| r.seed).collect(),
        steps: first.map(|r| r.steps.clone()).unwrap_or_default(),
        z: series_stats(|r| &r.z, records),
        events: series_stats(|r| &r.events, records),
        observables,
        final_sup_distance: ScalarStats::from_values(&distances),
        zeta_truncation: first.and_then(|r| r.zeta_truncation),
    }
}

/// Fraction of replicas in which `Z_n([0, f])` reaches zero at an odd time
/// `n <= horizon`, starting from a single species of fitness `f` at time 1.
///
/// Needs `Y ≡ 1`.
pub fn bp_hit_zero_frequency(
    m: &FitnessMeasure,
    law: &IncrementLaw,
    f: f64,
    replicas: usize,
    horizon: u64,
    seed: u64,
) -> Result<f64> {
    if !law.unit_deaths() {
        return Err(Error::WrongRegime("hit-zero frequency needs Y ≡ 1".into()));
    }
    if replicas == 0 {
        return Err(Error::Argument("replicas must be at least 1".into()));
    }
    let observed = [Observable::new("low", BorelSet::left(f, true)?)];
    let hits = in_pool(|| {
        (0..replicas as u64)
            .into_par_iter()
            .map(|r| -> Result<bool> {
                let pop = Population::with_species(1, &[(f, 1)])?;
                let mut engine = Engine::new(pop, CycleSampler::new(m, law, replica_seed(seed, r)), &observed);
                while engine.n() + 2 <= horizon {
                    engine.step()?;
                    engine.step()?;
                    if engine.count(0) == 0 {
                        return Ok(true);
                    }
                }
                Ok(false)
            })
            .collect::<Result<Vec<bool>>>()
    })?;
    Ok(hits.iter().filter(|&&h| h).count() as f64 / replicas as f64)
}
