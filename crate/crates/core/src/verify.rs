//! Self-checks comparing the closed forms with tabulated values and the
//! simulator with the closed forms.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analytics::{bp_extinction, critical_fitness, limit_cdf};
use crate::error::{Error, Result};
use crate::increments::{DiscreteLaw, FitnessBatch, IncrementLaw};
use crate::measure::{BorelSet, FitnessMeasure};
use crate::population::Population;
use crate::simulate::{
    bp_hit_zero_frequency, generate_cycles, queue_from_cycles, run_on_cycles, run_replicas_with_seeds,
    replica_seed, sup_distance, RecordPolicy, SimConfig,
};

/// Tolerance for tabulated closed forms.
pub const TABLE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Tables,
    Duality,
    Shape,
    Bp,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Tables, Suite::Duality, Suite::Shape, Suite::Bp];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Tables => "tables",
            Suite::Duality => "duality",
            Suite::Shape => "shape",
            Suite::Bp => "bp",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Argument(format!("unknown suite {s:?} (expected tables, duality, shape or bp)")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub observed: String,
    pub expected: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.pass).count()
    }

    pub fn all_passed(&self) -> bool {
        self.passed() == self.checks.len()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} {}: observed {}, expected {}", c.name, c.observed, c.expected)?;
        }
        write!(f, "{}: {}/{} checks passed", self.suite, self.passed(), self.checks.len())
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Tables => tables()?,
        Suite::Duality => duality(seed)?,
        Suite::Shape => shape(seed)?,
        Suite::Bp => bp(seed)?,
    };
    Ok(SuiteReport { suite, checks })
}

/// `1/2 δ_{1/2} + 1/2 U[0, 1]`, the measure of every tabulated row.
fn fair_coin() -> FitnessMeasure {
    FitnessMeasure::atom_mixture(0.5, 0.5).expect("valid mixture")
}

/// One tabulated row: `f_c`, `F(f_c)`, `F(f_c-)`, `E[F(f_c) X - Y]`,
/// `E[F(f_c-) X - Y]` and `F_inf`.
struct Row {
    label: String,
    law: IncrementLaw,
    values: [f64; 5],
    limit: fn(f64) -> f64,
}

fn ind(c: bool) -> f64 {
    if c {
        1.0
    } else {
        0.0
    }
}

fn rows() -> Vec<Row> {
    // (gms p, markov (p, q), f_c, F(f_c), F(f_c-), gms drifts, markov drifts, F_inf)
    type Spec = (f64, (f64, f64), [f64; 3], [f64; 2], [f64; 2], fn(f64) -> f64);
    let specs: [Spec; 5] = [
        (8.0 / 15.0, (2.0 / 9.0, 1.0 / 9.0), [0.75, 7.0 / 8.0, 7.0 / 8.0], [0.0, 0.0], [0.0, 0.0], |f| {
            (4.0 * f - 3.0) * ind(f >= 0.75)
        }),
        (4.0 / 7.0, (2.0 / 5.0, 1.0 / 5.0), [0.5, 0.75, 0.25], [0.0, -7.0 / 6.0], [0.0, -5.0 / 6.0], |f| {
            (2.0 * f - 1.0) * ind(f >= 0.5)
        }),
        (2.0 / 3.0, (3.0 / 4.0, 1.0 / 2.0), [0.5, 0.75, 0.25], [0.75, -0.75], [1.0, -1.0], |f| f * ind(f >= 0.5)),
        (4.0 / 5.0, (5.0 / 6.0, 1.0 / 3.0), [0.5, 0.75, 0.25], [2.5, 0.0], [3.0, 0.0], |f| {
            (2.0 * f + 1.0) / 3.0 * ind(f >= 0.5)
        }),
        (8.0 / 9.0, (9.0 / 10.0, 1.0 / 5.0), [0.25, 1.0 / 8.0, 1.0 / 8.0], [0.0, 0.0], [0.0, 0.0], |f| {
            (4.0 * f - 1.0) / 7.0 * ind(f >= 0.25) + 4.0 / 7.0 * ind(f >= 0.5)
        }),
    ];
    let mut out = Vec::new();
    for (p, (mp, mq), [fc, at, left], gms_drift, markov_drift, limit) in specs {
        out.push(Row {
            label: format!("gms p={p:.6}"),
            law: IncrementLaw::gms(p).expect("valid p"),
            values: [fc, at, left, gms_drift[0], gms_drift[1]],
            limit,
        });
        out.push(Row {
            label: format!("markov p={mp:.6} q={mq:.6}"),
            law: IncrementLaw::markov(mp, mq).expect("valid p, q"),
            values: [fc, at, left, markov_drift[0], markov_drift[1]],
            limit,
        });
    }
    out
}

fn tables() -> Result<Vec<Check>> {
    let m = fair_coin();
    let mut checks = Vec::new();
    for row in rows() {
        let fc = critical_fitness(&m, &row.law).to_f64();
        let at = m.cdf(fc)?;
        let left = m.cdf_left(fc)?;
        let observed = [fc, at, left, row.law.drift(at)?.to_f64(), row.law.drift(left)?.to_f64()];
        let mut worst = observed.iter().zip(&row.values).map(|(o, e)| (o - e).abs()).fold(0.0, f64::max);
        for i in 0..=100 {
            let f = i as f64 / 100.0;
            worst = worst.max((limit_cdf(&m, &row.law, f)? - (row.limit)(f)).abs());
        }
        let fmt = |v: &[f64; 5]| format!("{v:?}");
        checks.push(Check {
            name: row.label,
            observed: format!("{} (max error {worst:.1e})", fmt(&observed)),
            expected: fmt(&row.values),
            pass: worst <= TABLE_TOLERANCE,
        });
    }
    Ok(checks)
}

fn random_measure(rng: &mut ChaCha8Rng) -> FitnessMeasure {
    loop {
        let n_atoms = rng.random_range(0..=3);
        let n_pieces = rng.random_range(usize::from(n_atoms == 0)..=2);
        let weights: Vec<f64> = (0..n_atoms + n_pieces).map(|_| rng.random_range(0.1..1.0)).collect();
        let total: f64 = weights.iter().sum();
        let atoms = (0..n_atoms).map(|i| (rng.random::<f64>(), weights[i] / total)).collect();
        let pieces = (0..n_pieces)
            .map(|i| {
                let a: f64 = rng.random();
                let b: f64 = rng.random();
                (a.min(b), a.max(b), weights[n_atoms + i] / total)
            })
            .collect();
        if let Ok(m) = FitnessMeasure::new(atoms, pieces) {
            return m;
        }
    }
}

fn random_law(rng: &mut ChaCha8Rng) -> IncrementLaw {
    let law = if rng.random_bool(0.5) {
        IncrementLaw::gms(rng.random_range(0.1..0.9))
    } else {
        IncrementLaw::markov(rng.random_range(0.0..0.9), rng.random_range(0.0..0.9))
    }
    .expect("parameters in range");
    if rng.random_bool(0.2) {
        law.with_batch(FitnessBatch::Constant)
    } else {
        law
    }
}

/// Number of random configurations in the duality suite.
pub const DUALITY_CONFIGS: usize = 100;
/// Steps per duality configuration.
pub const DUALITY_HORIZON: u64 = 10_000;

fn duality(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::with_capacity(DUALITY_CONFIGS);
    for c in 0..DUALITY_CONFIGS {
        let m = random_measure(&mut rng);
        let law = random_law(&mut rng);
        let f = loop {
            let f: f64 = rng.random();
            if m.cdf(f)? > 0.0 {
                break f;
            }
        };
        let set = BorelSet::left(f, true)?;
        let cycles = generate_cycles(&m, &law, (DUALITY_HORIZON / 2) as usize, rng.random());
        let trace = queue_from_cycles(&set, &cycles);
        let cfg = SimConfig::new(m, law, DUALITY_HORIZON)
            .observe("left", set)
            .record(RecordPolicy { stride: 2, full_until: DUALITY_HORIZON, growth: 0.0 });
        let record = run_on_cycles(&cfg, &cycles)?;
        let series = &record.observables[0].z;
        let mismatches = (0..trace.queue.len()).filter(|&n| series[n] != trace.queue[n]).count();
        let reflection = trace.reflection_holds();
        checks.push(Check {
            name: format!("config {c} ({:?}, f={f:.4})", cfg.law.kind()),
            observed: format!("reflection identity {reflection}, {mismatches} population/queue mismatches"),
            expected: "identity holds, 0 mismatches".into(),
            pass: reflection && mismatches == 0,
        });
    }
    Ok(checks)
}

fn final_only(horizon: u64) -> RecordPolicy {
    RecordPolicy { stride: horizon, full_until: 0, growth: 0.0 }
}

/// Horizon and replica count of the shape suite.
pub const SHAPE_HORIZON: u64 = 200_000;
pub const SHAPE_REPLICAS: usize = 20;

fn shape(seed: u64) -> Result<Vec<Check>> {
    let m = fair_coin();
    let n = SHAPE_HORIZON as f64;
    let seeds: Vec<u64> = (0..SHAPE_REPLICAS as u64).map(|r| replica_seed(seed, r)).collect();
    let mut checks = Vec::new();

    // gms(2/3): Z_n/n -> E[X - Y]/2 = 3/4, N_n/n -> E[X + Y]/2 = 9/4.
    let law = IncrementLaw::gms(2.0 / 3.0)?;
    let cfg = SimConfig::new(m.clone(), law.clone(), SHAPE_HORIZON).record(final_only(SHAPE_HORIZON));
    let records = run_replicas_with_seeds(&cfg, &seeds)?;
    let mut distance = 0.0;
    for r in &records {
        let cdf = Population::from_snapshot(&r.final_state)?.empirical_cdf()?;
        distance += sup_distance(&cdf, &m, &law)?;
    }
    distance /= records.len() as f64;
    checks.push(Check {
        name: "gms 2/3 mean sup-distance to limit shape".into(),
        observed: format!("{distance:.5}"),
        expected: "< 0.02".into(),
        pass: distance < 0.02,
    });
    let growth = records.iter().map(|r| *r.z.last().expect("recorded") as f64 / n).sum::<f64>() / records.len() as f64;
    checks.push(Check {
        name: "gms 2/3 mean Z_n/n".into(),
        observed: format!("{growth:.5}"),
        expected: "0.75 within 2%".into(),
        pass: (growth - 0.75).abs() <= 0.02 * 0.75,
    });
    let events = records.iter().map(|r| *r.events.last().expect("recorded") as f64 / n).sum::<f64>() / records.len() as f64;
    checks.push(Check {
        name: "gms 2/3 mean N_n/n".into(),
        observed: format!("{events:.5}"),
        expected: "[2.2, 2.3]".into(),
        pass: (2.2..=2.3).contains(&events),
    });

    // gms(4/5): atom at f_c = 1/2 carries 2/3 of the limit shape.
    let law = IncrementLaw::gms(0.8)?;
    let cfg = SimConfig::new(m.clone(), law, SHAPE_HORIZON).record(final_only(SHAPE_HORIZON));
    let records = run_replicas_with_seeds(&cfg, &seeds)?;
    let atom = records
        .iter()
        .map(|r| {
            let at: u64 = r.final_state.entries.iter().filter(|e| e.0 == 0.5).map(|e| e.1).sum();
            at as f64 / r.final_state.total as f64
        })
        .sum::<f64>()
        / records.len() as f64;
    checks.push(Check {
        name: "gms 4/5 mean mass at fitness 1/2".into(),
        observed: format!("{atom:.5}"),
        expected: "2/3 within 0.02".into(),
        pass: (atom - 2.0 / 3.0).abs() < 0.02,
    });
    Ok(checks)
}

/// Replicas and horizon of the branching-process Monte Carlo.
pub const BP_REPLICAS: usize = 10_000;
pub const BP_HORIZON: u64 = 2_000;

fn bp(seed: u64) -> Result<Vec<Check>> {
    // X ≡ 2, μ uniform, f = 3/4: Ψ(z) = (3z/4 + 1/4)^2, smallest fixed point 1/9.
    let m = FitnessMeasure::uniform();
    let law = IncrementLaw::bp(DiscreteLaw::Deterministic(2))?;
    let q = bp_extinction(&m, &law, 0.75, false, 1, 1)?;
    let freq = bp_hit_zero_frequency(&m, &law, 0.75, BP_REPLICAS, BP_HORIZON, seed)?;
    Ok(vec![
        Check {
            name: "extinction probability, X ≡ 2, F(f) = 3/4".into(),
            observed: format!("{q:.12}"),
            expected: "1/9 within 1e-10".into(),
            pass: (q - 1.0 / 9.0).abs() < 1e-10,
        },
        Check {
            name: format!("hit-zero frequency over {BP_REPLICAS} replicas, horizon {BP_HORIZON}"),
            observed: format!("{freq:.4}"),
            expected: "[0.09, 0.13]".into(),
            pass: (0.09..=0.13).contains(&freq),
        },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn tables_pass() {
        let r = run_suite(Suite::Tables, 0).unwrap();
        assert_eq!(r.checks.len(), 10);
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn report_lines() {
        let r = SuiteReport {
            suite: Suite::Bp,
            checks: vec![Check { name: "a".into(), observed: "1".into(), expected: "2".into(), pass: false }],
        };
        assert_eq!(r.to_string(), "FAIL a: observed 1, expected 2\nbp: 0/1 checks passed");
        assert!(!r.all_passed());
    }
}
