//! The live species store: fitness → count, with odd-step batch births and
//! even-step removal of the least fit.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::Bound;

use crate::error::{Error, Result};
use crate::measure::{check_fitness, BorelSet};

/// Fitness as a totally ordered map key. Keys compare exactly; atoms of the
/// fitness measure produce bit-identical keys.
#[derive(Debug, Clone, Copy)]
struct Key(f64);

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

fn key_bound(b: Bound<f64>) -> Bound<Key> {
    match b {
        Bound::Included(x) => Bound::Included(Key(x + 0.0)),
        Bound::Excluded(x) => Bound::Excluded(Key(x + 0.0)),
        Bound::Unbounded => Bound::Unbounded,
    }
}

/// What one death step removed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct KillReport {
    /// `(fitness, count)` in increasing fitness; every entry except possibly
    /// the last was drained completely.
    pub removed: Vec<(f64, u64)>,
    pub requested: u64,
    /// Deaths that found nobody left to kill.
    pub shortfall: u64,
}

impl KillReport {
    pub fn removed_total(&self) -> u64 {
        self.removed.iter().map(|r| r.1).sum()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Population {
    store: BTreeMap<Key, u64>,
    total: u64,
    step: u64,
}

impl Population {
    pub fn new() -> Self {
        Self::default()
    }

    /// An initial state at an arbitrary time index.
    pub fn with_species(step: u64, species: &[(f64, u64)]) -> Result<Self> {
        let mut pop = Population { step, ..Self::default() };
        for &(f, c) in species {
            check_fitness(f)?;
            pop.insert(f, c);
        }
        Ok(pop)
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Number of distinct fitness values alive.
    pub fn distinct(&self) -> usize {
        self.store.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, u64)> + '_ {
        self.store.iter().map(|(k, &c)| (k.0, c))
    }

    fn insert(&mut self, f: f64, count: u64) {
        if count == 0 {
            return;
        }
        // -0.0 and 0.0 must share a key
        *self.store.entry(Key(f + 0.0)).or_insert(0) += count;
        self.total += count;
    }

    fn expect_parity(&self, even: bool) -> Result<()> {
        if self.step.is_multiple_of(2) == even {
            Ok(())
        } else {
            let expected = if even { "death" } else { "birth" };
            Err(Error::Sequencing { step: self.step, expected })
        }
    }

    /// Adds one species per listed fitness. Valid only at even `step`.
    pub fn birth_step(&mut self, batch: &[f64]) -> Result<()> {
        self.expect_parity(true)?;
        for &f in batch {
            check_fitness(f)?;
        }
        for &f in batch {
            self.insert(f, 1);
        }
        self.step += 1;
        Ok(())
    }

    /// Batch birth given as `(fitness, count)` pairs.
    pub fn birth_step_counts(&mut self, batch: &[(f64, u64)]) -> Result<()> {
        self.expect_parity(true)?;
        for &(f, _) in batch {
            check_fitness(f)?;
        }
        for &(f, c) in batch {
            self.insert(f, c);
        }
        self.step += 1;
        Ok(())
    }

    /// Removes the `deaths` least-fit species. Valid only at odd `step`.
    pub fn death_step(&mut self, deaths: u64) -> Result<KillReport> {
        self.expect_parity(false)?;
        let mut report = KillReport { requested: deaths, ..KillReport::default() };
        let mut remaining = deaths;
        while remaining > 0 {
            let Some(mut entry) = self.store.first_entry() else {
                break;
            };
            let fitness = entry.key().0;
            let count = *entry.get();
            if count <= remaining {
                entry.remove();
                report.removed.push((fitness, count));
                remaining -= count;
                self.total -= count;
            } else {
                *entry.get_mut() -= remaining;
                report.removed.push((fitness, remaining));
                self.total -= remaining;
                remaining = 0;
            }
        }
        report.shortfall = remaining;
        self.step += 1;
        Ok(report)
    }

    /// `Z_n(A)`.
    pub fn count_in(&self, set: &BorelSet) -> u64 {
        set.components()
            .iter()
            .map(|c| {
                self.store
                    .range((key_bound(c.lower_bound()), key_bound(c.upper_bound())))
                    .map(|(_, &n)| n)
                    .sum::<u64>()
            })
            .sum()
    }

    pub fn empirical_cdf(&self) -> Result<EmpiricalCdf> {
        if self.total == 0 {
            return Err(Error::EmptyPopulation);
        }
        let entries: Vec<(f64, u64)> = self.iter().collect();
        Ok(EmpiricalCdf::from_counts(&entries))
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot { step: self.step, total: self.total, entries: self.iter().collect() }
    }

    pub fn from_snapshot(s: &Snapshot) -> Result<Self> {
        Self::with_species(s.step, &s.entries)
    }
}

/// Right-continuous step function `f ↦ Z_n([0, f]) / Z_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    /// `(jump location, value from the jump on)`, locations increasing,
    /// last value 1.
    points: Vec<(f64, f64)>,
}

impl EmpiricalCdf {
    /// From sorted `(fitness, count)` pairs with positive total.
    pub fn from_counts(entries: &[(f64, u64)]) -> Self {
        let total: u64 = entries.iter().map(|e| e.1).sum();
        let mut acc = 0u64;
        let mut points: Vec<(f64, f64)> = entries
            .iter()
            .map(|&(f, c)| {
                acc += c;
                (f, acc as f64 / total as f64)
            })
            .collect();
        if let Some(last) = points.last_mut() {
            last.1 = 1.0;
        }
        EmpiricalCdf { points }
    }

    /// Wraps already computed `(location, value)` steps.
    pub fn from_steps(points: Vec<(f64, f64)>) -> Self {
        EmpiricalCdf { points }
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn value(&self, f: f64) -> f64 {
        let i = self.points.partition_point(|p| p.0 <= f);
        if i == 0 {
            0.0
        } else {
            self.points[i - 1].1
        }
    }

    pub fn value_left(&self, f: f64) -> f64 {
        let i = self.points.partition_point(|p| p.0 < f);
        if i == 0 {
            0.0
        } else {
            self.points[i - 1].1
        }
    }
}

/// A dumped population state.
///
/// Text form: a `# step=<n> total=<t>` line, a `fitness,count` header line,
/// then one row per distinct fitness in increasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: u64,
    pub total: u64,
    pub entries: Vec<(f64, u64)>,
}

impl Snapshot {
    pub fn to_csv(&self) -> String {
        let mut out = format!("# step={} total={}\nfitness,count\n", self.step, self.total);
        for (f, c) in &self.entries {
            writeln!(out, "{f},{c}").expect("writing to a String");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: String| Error::Snapshot(msg);
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad("empty input".into()))?;
        let rest = header
            .strip_prefix("# step=")
            .ok_or_else(|| bad(format!("bad header {header:?}")))?;
        let (step, total) = rest
            .split_once(" total=")
            .ok_or_else(|| bad(format!("bad header {header:?}")))?;
        let step: u64 = step.parse().map_err(|_| bad(format!("bad step {step:?}")))?;
        let total: u64 = total.parse().map_err(|_| bad(format!("bad total {total:?}")))?;
        if lines.next() != Some("fitness,count") {
            return Err(bad("missing 'fitness,count' header".into()));
        }
        let mut entries: Vec<(f64, u64)> = Vec::new();
        let mut sum = 0u64;
        for (i, line) in lines.enumerate() {
            let (f, c) = line
                .split_once(',')
                .ok_or_else(|| bad(format!("row {i}: expected 'fitness,count'")))?;
            let f: f64 = f.parse().map_err(|_| bad(format!("row {i}: bad fitness {f:?}")))?;
            let c: u64 = c.parse().map_err(|_| bad(format!("row {i}: bad count {c:?}")))?;
            if !(0.0..=1.0).contains(&f) {
                return Err(bad(format!("row {i}: fitness {f} outside [0, 1]")));
            }
            if c == 0 {
                return Err(bad(format!("row {i}: zero count")));
            }
            if entries.last().is_some_and(|last| last.0 >= f) {
                return Err(bad(format!("row {i}: fitness not strictly increasing")));
            }
            sum = sum.checked_add(c).ok_or_else(|| bad("count overflow".into()))?;
            entries.push((f + 0.0, c));
        }
        if sum != total {
            return Err(bad(format!("rows sum to {sum}, header says {total}")));
        }
        Ok(Snapshot { step, total, entries })
    }
}
