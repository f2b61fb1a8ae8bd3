//! Monte Carlo engine for the birth/death process.
//!
//! Randomness enters only through a [`CycleSource`]: each cycle is one
//! `(X, Y)` draw plus the fitness values of its `X` births. Feeding the same
//! cycles to the population engine and to the reduced queue recursion makes
//! the two directly comparable.

mod counterexample;
mod distance;
mod queue;
mod replicate;

pub use counterexample::{build_counterexample_law, counterexample_demo, CounterexampleLaw, DemoOutcome, MAX_FEASIBLE_K};
pub use distance::{sup_distance, sup_distance_to, sup_distance_to_measure};
pub use queue::{queue_from_cycles, run_queue, LeftInterval, QueueTrace};
pub use replicate::{
    aggregate, bp_hit_zero_frequency, replica_seed, replicate, run_replicas, run_replicas_with_seeds, Aggregate,
    ObservableStats, ScalarStats, SeriesStats, THREADS_ENV,
};

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::increments::{FitnessBatch, IncrementLaw, PairSampler};
use crate::measure::{BorelSet, FitnessMeasure};
use crate::population::{Population, Snapshot};

/// The generator behind every simulation stream.
pub type SimRng = ChaCha8Rng;

/// One birth batch and the death count that follows it.
#[derive(Debug, Clone, PartialEq)]
pub struct Cycle {
    pub x: u64,
    pub y: u64,
    /// `(fitness, count)`; one entry per species for iid batches, a single
    /// entry for batch-constant fitness.
    pub births: Vec<(f64, u64)>,
}

impl Cycle {
    /// Births landing in `set`.
    pub fn births_in(&self, set: &BorelSet) -> u64 {
        self.births.iter().filter(|b| set.contains(b.0)).map(|b| b.1).sum()
    }
}

pub trait CycleSource {
    fn next_cycle(&mut self) -> Option<Cycle>;
}

/// Draws cycles from a seeded generator: the pair first, then the fitness
/// values in birth order.
#[derive(Debug, Clone)]
pub struct CycleSampler {
    measure: FitnessMeasure,
    pairs: PairSampler,
    batch: FitnessBatch,
    rng: SimRng,
}

impl CycleSampler {
    pub fn new(measure: &FitnessMeasure, law: &IncrementLaw, seed: u64) -> Self {
        CycleSampler {
            measure: measure.clone(),
            pairs: law.sampler(),
            batch: law.batch(),
            rng: SimRng::seed_from_u64(seed),
        }
    }

    pub fn draw(&mut self) -> Cycle {
        let (x, y) = self.pairs.sample(&mut self.rng);
        let births = match self.batch {
            FitnessBatch::Iid => (0..x).map(|_| (self.measure.sample(&mut self.rng), 1)).collect(),
            FitnessBatch::Constant if x > 0 => vec![(self.measure.sample(&mut self.rng), x)],
            FitnessBatch::Constant => vec![],
        };
        Cycle { x, y, births }
    }
}

impl CycleSource for CycleSampler {
    fn next_cycle(&mut self) -> Option<Cycle> {
        Some(self.draw())
    }
}

/// Replays a recorded stream.
#[derive(Debug, Clone)]
pub struct Replay<'a> {
    cycles: std::slice::Iter<'a, Cycle>,
}

impl<'a> Replay<'a> {
    pub fn new(cycles: &'a [Cycle]) -> Self {
        Replay { cycles: cycles.iter() }
    }
}

impl CycleSource for Replay<'_> {
    fn next_cycle(&mut self) -> Option<Cycle> {
        self.cycles.next().cloned()
    }
}

pub fn generate_cycles(measure: &FitnessMeasure, law: &IncrementLaw, count: usize, seed: u64) -> Vec<Cycle> {
    let mut s = CycleSampler::new(measure, law, seed);
    (0..count).map(|_| s.draw()).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    pub name: String,
    pub set: BorelSet,
}

impl Observable {
    pub fn new(name: impl Into<String>, set: BorelSet) -> Self {
        Observable { name: name.into(), set }
    }
}

/// Which steps a trajectory keeps: every `stride`-th step up to
/// `full_until`, then the steps `ceil(growth^k)`, then the horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecordPolicy {
    pub stride: u64,
    pub full_until: u64,
    pub growth: f64,
}

impl Default for RecordPolicy {
    fn default() -> Self {
        RecordPolicy { stride: 1, full_until: 10_000, growth: 1.01 }
    }
}

impl RecordPolicy {
    pub fn steps(&self, horizon: u64) -> Vec<u64> {
        let stride = self.stride.max(1);
        let mut out: Vec<u64> = (0..=horizon.min(self.full_until)).step_by(stride as usize).collect();
        if self.growth > 1.0 {
            let mut x = 1.0f64;
            loop {
                let s = x.ceil() as u64;
                if s > horizon {
                    break;
                }
                if s > self.full_until {
                    out.push(s);
                }
                x *= self.growth;
            }
        }
        out.push(horizon);
        out.sort_unstable();
        out.dedup();
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub measure: FitnessMeasure,
    pub law: IncrementLaw,
    /// Number of steps; even.
    pub horizon: u64,
    pub observables: Vec<Observable>,
    pub snapshot_times: Vec<u64>,
    pub seed: u64,
    pub replicas: usize,
    pub record: RecordPolicy,
}

impl SimConfig {
    pub fn new(measure: FitnessMeasure, law: IncrementLaw, horizon: u64) -> Self {
        SimConfig {
            measure,
            law,
            horizon,
            observables: Vec::new(),
            snapshot_times: Vec::new(),
            seed: 0,
            replicas: 1,
            record: RecordPolicy::default(),
        }
    }

    pub fn observe(mut self, name: impl Into<String>, set: BorelSet) -> Self {
        self.observables.push(Observable::new(name, set));
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn replicas(mut self, replicas: usize) -> Self {
        self.replicas = replicas;
        self
    }

    pub fn snapshots(mut self, times: Vec<u64>) -> Self {
        self.snapshot_times = times;
        self
    }

    pub fn record(mut self, record: RecordPolicy) -> Self {
        self.record = record;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.horizon < 2 || !self.horizon.is_multiple_of(2) {
            return bad(format!("horizon {} must be even and at least 2", self.horizon));
        }
        if self.replicas < 1 {
            return bad("replicas must be at least 1".into());
        }
        let mut names = HashSet::new();
        for o in &self.observables {
            if !names.insert(o.name.as_str()) {
                return bad(format!("duplicate observable name {:?}", o.name));
            }
            if o.name.is_empty() || o.name.contains([',', '\n', '"']) {
                return bad(format!("observable name {:?} is not a valid CSV column suffix", o.name));
            }
        }
        if let Some(t) = self.snapshot_times.iter().find(|&&t| t > self.horizon) {
            return bad(format!("snapshot time {t} beyond horizon {}", self.horizon));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct Tracked {
    set: BorelSet,
    z: u64,
    killed: u64,
    empty_epochs: u64,
    born: u64,
}

/// Step-by-step driver of one population with incremental observable
/// counts.
#[derive(Debug, Clone)]
pub struct Engine<S> {
    pop: Population,
    source: S,
    tracked: Vec<Tracked>,
    events: u64,
    pending_deaths: Option<u64>,
}

impl<S: CycleSource> Engine<S> {
    pub fn new(pop: Population, source: S, observables: &[Observable]) -> Self {
        let even = pop.step().is_multiple_of(2);
        let tracked = observables
            .iter()
            .map(|o| {
                let z = pop.count_in(&o.set);
                Tracked { set: o.set.clone(), z, killed: 0, empty_epochs: u64::from(even && z == 0), born: 0 }
            })
            .collect();
        Engine { pop, source, tracked, events: 0, pending_deaths: None }
    }

    pub fn population(&self) -> &Population {
        &self.pop
    }

    /// Current time index `n`.
    pub fn n(&self) -> u64 {
        self.pop.step()
    }

    /// `N_n`: births plus requested deaths so far.
    pub fn events(&self) -> u64 {
        self.events
    }

    /// `Z_n(A)` for observable `i`.
    pub fn count(&self, i: usize) -> u64 {
        self.tracked[i].z
    }

    /// `K_n(A)`.
    pub fn killed(&self, i: usize) -> u64 {
        self.tracked[i].killed
    }

    /// `tau_n(A)`: even epochs `2i <= n` with `Z_{2i}(A) = 0`.
    pub fn empty_epochs(&self, i: usize) -> u64 {
        self.tracked[i].empty_epochs
    }

    /// Births into `A` so far.
    pub fn born(&self, i: usize) -> u64 {
        self.tracked[i].born
    }

    fn draw(&mut self) -> Result<Cycle> {
        self.source.next_cycle().ok_or_else(|| Error::Argument("cycle stream exhausted".into()))
    }

    /// Advances one step: births at even `n`, deaths at odd `n`.
    pub fn step(&mut self) -> Result<()> {
        if self.pop.step().is_multiple_of(2) {
            let cycle = self.draw()?;
            self.pop.birth_step_counts(&cycle.births)?;
            for t in &mut self.tracked {
                let c = cycle.births_in(&t.set);
                t.z += c;
                t.born += c;
            }
            self.events += cycle.x;
            self.pending_deaths = Some(cycle.y);
        } else {
            let deaths = match self.pending_deaths.take() {
                Some(y) => y,
                None => self.draw()?.y,
            };
            let report = self.pop.death_step(deaths)?;
            for t in &mut self.tracked {
                let c: u64 = report.removed.iter().filter(|r| t.set.contains(r.0)).map(|r| r.1).sum();
                t.z -= c;
                t.killed += c;
                if t.z == 0 {
                    t.empty_epochs += 1;
                }
            }
            self.events += deaths;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSeries {
    pub name: String,
    pub z: Vec<u64>,
    pub killed: Vec<u64>,
    pub empty_epochs: Vec<u64>,
    pub born: Vec<u64>,
}

/// Recorded trajectory of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub seed: u64,
    pub steps: Vec<u64>,
    pub z: Vec<u64>,
    pub events: Vec<u64>,
    pub observables: Vec<ObservableSeries>,
    pub snapshots: Vec<Snapshot>,
    pub final_state: Snapshot,
    /// Largest value zeta-distributed `X` may take in this run.
    pub zeta_truncation: Option<u64>,
}

impl TrajectoryRecord {
    pub fn csv_header(&self) -> String {
        let mut h = String::from("n,Z,N");
        for o in &self.observables {
            write!(h, ",Z_{0},K_{0},tau_{0}", o.name).expect("writing to a String");
        }
        h
    }

    /// `n,Z,N` then `Z_<name>,K_<name>,tau_<name>` per observable.
    pub fn to_csv(&self) -> String {
        let mut out = self.csv_header();
        out.push('\n');
        for i in 0..self.steps.len() {
            write!(out, "{},{},{}", self.steps[i], self.z[i], self.events[i]).expect("writing to a String");
            for o in &self.observables {
                write!(out, ",{},{},{}", o.z[i], o.killed[i], o.empty_epochs[i]).expect("writing to a String");
            }
            out.push('\n');
        }
        out
    }

    pub fn series(&self, name: &str) -> Option<&ObservableSeries> {
        self.observables.iter().find(|o| o.name == name)
    }

    /// Index of the last recorded step `<= n`.
    pub fn index_at(&self, n: u64) -> usize {
        self.steps.partition_point(|&s| s <= n).saturating_sub(1)
    }
}

/// Runs `cfg` once with `cfg.seed`.
pub fn run(cfg: &SimConfig) -> Result<TrajectoryRecord> {
    run_with_seed(cfg, cfg.seed)
}

pub fn run_with_seed(cfg: &SimConfig, seed: u64) -> Result<TrajectoryRecord> {
    let source = CycleSampler::new(&cfg.measure, &cfg.law, seed);
    let mut record = run_with_source(cfg, source)?;
    record.seed = seed;
    Ok(record)
}

/// Runs `cfg` on a recorded cycle stream.
pub fn run_on_cycles(cfg: &SimConfig, cycles: &[Cycle]) -> Result<TrajectoryRecord> {
    run_with_source(cfg, Replay::new(cycles))
}

pub fn run_with_source<S: CycleSource>(cfg: &SimConfig, source: S) -> Result<TrajectoryRecord> {
    cfg.validate()?;
    let schedule = cfg.record.steps(cfg.horizon);
    let mut snapshot_times = cfg.snapshot_times.clone();
    snapshot_times.sort_unstable();
    snapshot_times.dedup();

    let mut engine = Engine::new(Population::new(), source, &cfg.observables);
    let mut record = TrajectoryRecord {
        seed: cfg.seed,
        steps: Vec::with_capacity(schedule.len()),
        z: Vec::with_capacity(schedule.len()),
        events: Vec::with_capacity(schedule.len()),
        observables: cfg
            .observables
            .iter()
            .map(|o| ObservableSeries {
                name: o.name.clone(),
                z: Vec::with_capacity(schedule.len()),
                killed: Vec::with_capacity(schedule.len()),
                empty_epochs: Vec::with_capacity(schedule.len()),
                born: Vec::with_capacity(schedule.len()),
            })
            .collect(),
        snapshots: Vec::new(),
        final_state: Snapshot { step: 0, total: 0, entries: vec![] },
        zeta_truncation: cfg.law.law_x().truncation(),
    };

    let mut next_record = schedule.iter().peekable();
    let mut next_snapshot = snapshot_times.iter().peekable();
    loop {
        let n = engine.n();
        if next_record.next_if_eq(&&n).is_some() {
            record.steps.push(n);
            record.z.push(engine.population().total());
            record.events.push(engine.events());
            for (i, series) in record.observables.iter_mut().enumerate() {
                series.z.push(engine.count(i));
                series.killed.push(engine.killed(i));
                series.empty_epochs.push(engine.empty_epochs(i));
                series.born.push(engine.born(i));
            }
        }
        if next_snapshot.next_if_eq(&&n).is_some() {
            record.snapshots.push(engine.population().snapshot());
        }
        if n >= cfg.horizon {
            break;
        }
        engine.step()?;
    }
    record.final_state = engine.population().snapshot();
    Ok(record)
}
