//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Expected values come from closed forms evaluated here, never from the
//! library's own tables. Pass criterion numbers as arguments to run a subset.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fitness_evo::analytics::{bp_extinction, classify_left_interval, critical_fitness, limit_cdf, Recurrence};
use fitness_evo::simulate::{
    bp_hit_zero_frequency, counterexample_demo, generate_cycles, replica_seed, run_on_cycles, run_queue,
    run_replicas_with_seeds, run_with_seed, sup_distance, Cycle, LeftInterval, RecordPolicy, SimConfig,
    TrajectoryRecord,
};
use fitness_evo::{BorelSet, DiscreteLaw, FitnessBatch, FitnessMeasure, IncrementLaw, Population};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn secs(d: Duration) -> String {
    format!("{:.2} s", d.as_secs_f64())
}

/// `1/2 δ_{1/2} + 1/2 U[0, 1]`.
fn fair_coin() -> FitnessMeasure {
    FitnessMeasure::new(vec![(0.5, 0.5)], vec![(0.0, 1.0, 0.5)]).unwrap()
}

/// `F` of the fair coin and its left limit, written out directly.
fn coin_cdf(f: f64) -> f64 {
    f / 2.0 + if f >= 0.5 { 0.5 } else { 0.0 }
}
fn coin_cdf_left(f: f64) -> f64 {
    f / 2.0 + if f > 0.5 { 0.5 } else { 0.0 }
}

fn ind(c: bool) -> f64 {
    if c {
        1.0
    } else {
        0.0
    }
}

fn final_only(horizon: u64) -> RecordPolicy {
    RecordPolicy { stride: horizon, full_until: 0, growth: 0.0 }
}

fn seeds(master: u64, n: usize) -> Vec<u64> {
    (0..n as u64).map(|r| replica_seed(master, r)).collect()
}

fn mean(v: impl IntoIterator<Item = f64>) -> f64 {
    let (s, n) = v.into_iter().fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    s / n as f64
}

// ---------------------------------------------------------------------------

struct Row {
    gms: f64,
    markov: (f64, f64),
    fc: f64,
    at: f64,
    left: f64,
    gms_drift: (f64, f64),
    markov_drift: (f64, f64),
    limit: fn(f64) -> f64,
}

fn table_rows() -> Vec<Row> {
    vec![
        Row {
            gms: 8.0 / 15.0,
            markov: (2.0 / 9.0, 1.0 / 9.0),
            fc: 0.75,
            at: 7.0 / 8.0,
            left: 7.0 / 8.0,
            gms_drift: (0.0, 0.0),
            markov_drift: (0.0, 0.0),
            limit: |f| (4.0 * f - 3.0) * ind(f >= 0.75),
        },
        Row {
            gms: 4.0 / 7.0,
            markov: (2.0 / 5.0, 1.0 / 5.0),
            fc: 0.5,
            at: 0.75,
            left: 0.25,
            gms_drift: (0.0, -7.0 / 6.0),
            markov_drift: (0.0, -5.0 / 6.0),
            limit: |f| (2.0 * f - 1.0) * ind(f >= 0.5),
        },
        Row {
            gms: 2.0 / 3.0,
            markov: (3.0 / 4.0, 1.0 / 2.0),
            fc: 0.5,
            at: 0.75,
            left: 0.25,
            gms_drift: (0.75, -0.75),
            markov_drift: (1.0, -1.0),
            limit: |f| f * ind(f >= 0.5),
        },
        Row {
            gms: 4.0 / 5.0,
            markov: (5.0 / 6.0, 1.0 / 3.0),
            fc: 0.5,
            at: 0.75,
            left: 0.25,
            gms_drift: (2.5, 0.0),
            markov_drift: (3.0, 0.0),
            limit: |f| (2.0 * f + 1.0) / 3.0 * ind(f >= 0.5),
        },
        Row {
            gms: 8.0 / 9.0,
            markov: (9.0 / 10.0, 1.0 / 5.0),
            fc: 0.25,
            at: 1.0 / 8.0,
            left: 1.0 / 8.0,
            gms_drift: (0.0, 0.0),
            markov_drift: (0.0, 0.0),
            limit: |f| (4.0 * f - 1.0) / 7.0 * ind(f >= 0.25) + 4.0 / 7.0 * ind(f >= 0.5),
        },
    ]
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let m = fair_coin();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for row in table_rows() {
        let cases = [
            (format!("gms {:.4}", row.gms), IncrementLaw::gms(row.gms).unwrap(), row.gms_drift),
            (
                format!("markov {:.4},{:.4}", row.markov.0, row.markov.1),
                IncrementLaw::markov(row.markov.0, row.markov.1).unwrap(),
                row.markov_drift,
            ),
        ];
        for (label, law, drift) in cases {
            let fc = critical_fitness(&m, &law).finite().unwrap_or(f64::NAN);
            let at = m.cdf(fc).unwrap_or(f64::NAN);
            let left = m.cdf_left(fc).unwrap_or(f64::NAN);
            let mut errs = vec![
                (fc - row.fc).abs(),
                (at - row.at).abs(),
                (left - row.left).abs(),
                (law.drift(at).unwrap().to_f64() - drift.0).abs(),
                (law.drift(left).unwrap().to_f64() - drift.1).abs(),
            ];
            // the fitness law itself, checked against the hand-written cdf
            errs.push((at - coin_cdf(row.fc)).abs());
            errs.push((left - coin_cdf_left(row.fc)).abs());
            for i in 0..=100 {
                let f = i as f64 / 100.0;
                errs.push((limit_cdf(&m, &law, f).unwrap() - (row.limit)(f)).abs());
            }
            let e = errs.iter().copied().fold(0.0, |a: f64, b| if b.is_nan() { f64::INFINITY } else { a.max(b) });
            worst = worst.max(e);
            if e > 1e-9 {
                failures.push(label);
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && elapsed < Duration::from_secs(1),
        format!("10 rows, max error {worst:.1e} (tolerance 1e-9), failing {failures:?}, {}", secs(elapsed)),
    )
}

// ---------------------------------------------------------------------------

fn random_measure(rng: &mut ChaCha8Rng) -> FitnessMeasure {
    loop {
        let atoms = rng.random_range(0..=3usize);
        let pieces = rng.random_range(usize::from(atoms == 0)..=2);
        let w: Vec<f64> = (0..atoms + pieces).map(|_| rng.random_range(0.05..1.0)).collect();
        let total: f64 = w.iter().sum();
        let a = (0..atoms).map(|i| (rng.random::<f64>(), w[i] / total)).collect();
        let p = (0..pieces)
            .map(|i| {
                let (x, y): (f64, f64) = (rng.random(), rng.random());
                (x.min(y), x.max(y), w[atoms + i] / total)
            })
            .collect();
        if let Ok(m) = FitnessMeasure::new(a, p) {
            return m;
        }
    }
}

fn random_law(rng: &mut ChaCha8Rng) -> IncrementLaw {
    let law = if rng.random_bool(0.5) {
        IncrementLaw::gms(rng.random_range(0.05..0.95)).unwrap()
    } else {
        IncrementLaw::markov(rng.random_range(0.0..0.95), rng.random_range(0.0..0.95)).unwrap()
    };
    if rng.random_bool(0.25) {
        law.with_batch(FitnessBatch::Constant)
    } else {
        law
    }
}

/// Lindley recursion and free walk, recomputed from the raw cycles.
fn queue_oracle(cycles: &[Cycle], f: f64, closed: bool) -> (Vec<u64>, Vec<i64>) {
    let inside = |x: f64| if closed { x <= f } else { x < f };
    let (mut q, mut s) = (0i64, 0i64);
    let (mut queue, mut walk) = (vec![0u64], vec![0i64]);
    for c in cycles {
        let born: i64 = c.births.iter().filter(|b| inside(b.0)).map(|b| b.1 as i64).sum();
        q = (q + born - c.y as i64).max(0);
        s += born - c.y as i64;
        queue.push(q as u64);
        walk.push(s);
    }
    (queue, walk)
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let horizon = 10_000u64;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d0a1);
    let mut bad = Vec::new();
    for c in 0..100 {
        let m = random_measure(&mut rng);
        let law = random_law(&mut rng);
        let closed = rng.random_bool(0.7);
        let f = loop {
            let f: f64 = rng.random();
            let mass = if closed { m.cdf(f).unwrap() } else { m.cdf_left(f).unwrap() };
            if mass > 0.0 {
                break f;
            }
        };
        let seed: u64 = rng.random();
        let cycles = generate_cycles(&m, &law, (horizon / 2) as usize, seed);
        let (queue, walk) = queue_oracle(&cycles, f, closed);

        let mut min = i64::MAX;
        let reflected = queue.iter().zip(&walk).all(|(&q, &s)| {
            min = min.min(s);
            q as i64 == s - min
        });
        let trace = run_queue(&m, &law, LeftInterval { f, closed }, horizon, seed).unwrap();
        let library_matches = trace.queue == queue && trace.walk == walk;
        let cfg = SimConfig::new(m.clone(), law.clone(), horizon)
            .observe("i", BorelSet::left(f, closed).unwrap())
            .record(RecordPolicy { stride: 2, full_until: horizon, growth: 0.0 });
        let rec = run_on_cycles(&cfg, &cycles).unwrap();
        let population_matches = rec.observables[0].z == queue;
        if !(reflected && library_matches && population_matches) {
            bad.push((c, reflected, library_matches, population_matches));
        }
    }
    let elapsed = start.elapsed();
    outcome(
        bad.is_empty() && elapsed < Duration::from_secs(30),
        format!("100 random configs, horizon 10^4, failures {bad:?}, {}", secs(elapsed)),
    )
}

// ---------------------------------------------------------------------------

/// Empirical cdf recomputed from snapshot rows.
fn empirical(entries: &[(f64, u64)], f: f64, strict: bool) -> f64 {
    let total: u64 = entries.iter().map(|e| e.1).sum();
    let below: u64 = entries.iter().filter(|e| if strict { e.0 < f } else { e.0 <= f }).map(|e| e.1).sum();
    below as f64 / total as f64
}

/// Brute-force Kolmogorov distance on a grid plus one-sided limits at the
/// given jump points.
fn grid_distance(entries: &[(f64, u64)], target: fn(f64) -> f64, jumps: &[f64]) -> f64 {
    let cum: Vec<(f64, f64)> = {
        let total: u64 = entries.iter().map(|e| e.1).sum();
        let mut acc = 0u64;
        entries
            .iter()
            .map(|e| {
                acc += e.1;
                (e.0, acc as f64 / total as f64)
            })
            .collect()
    };
    let at = |f: f64| {
        let i = cum.partition_point(|c| c.0 <= f);
        if i == 0 {
            0.0
        } else {
            cum[i - 1].1
        }
    };
    let mut d = 0.0f64;
    for i in 0..=10_000 {
        let f = i as f64 / 10_000.0;
        d = d.max((at(f) - target(f)).abs());
    }
    for &j in jumps {
        d = d.max((empirical(entries, j, true) - target(j - 1e-12)).abs());
        d = d.max((empirical(entries, j, false) - target(j)).abs());
    }
    d
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let horizon = 200_000u64;
    let m = fair_coin();
    let law = IncrementLaw::gms(2.0 / 3.0).unwrap();
    // Z_n/n -> E[X - Y]/2 with E[X] = 3, E[Y] = 3/2
    let growth_oracle = (3.0 - 1.5) / 2.0;
    let cfg = SimConfig::new(m.clone(), law.clone(), horizon).record(final_only(horizon));
    let records = run_replicas_with_seeds(&cfg, &seeds(3, 20)).unwrap();
    let mut lib = Vec::new();
    let mut oracle = Vec::new();
    for r in &records {
        let cdf = Population::from_snapshot(&r.final_state).unwrap().empirical_cdf().unwrap();
        lib.push(sup_distance(&cdf, &m, &law).unwrap());
        oracle.push(grid_distance(&r.final_state.entries, |f| f * ind(f >= 0.5), &[0.5]));
    }
    let (d, d_oracle) = (mean(lib.iter().copied()), mean(oracle.iter().copied()));
    let agree = lib.iter().zip(&oracle).all(|(l, o)| *o <= l + 1e-12 && l - o < 1e-3);
    let growth = mean(records.iter().map(|r| *r.z.last().unwrap() as f64 / horizon as f64));
    let elapsed = start.elapsed();
    outcome(
        d < 0.02 && agree && (growth - growth_oracle).abs() <= 0.02 * growth_oracle && elapsed < Duration::from_secs(60),
        format!(
            "mean sup-distance {d:.5} (< 0.02; grid oracle {d_oracle:.5}, agree {agree}), mean Z_n/n {growth:.5} \
             (3/4 within 2%), {}",
            secs(elapsed)
        ),
    )
}

// ---------------------------------------------------------------------------

fn gms_four_fifths() -> Vec<TrajectoryRecord> {
    let horizon = 200_000u64;
    let cfg = SimConfig::new(fair_coin(), IncrementLaw::gms(0.8).unwrap(), horizon)
        .observe("low", BorelSet::closed(0.0, 0.5).unwrap())
        .observe("high", BorelSet::right(0.5, false).unwrap())
        .observe("above_0.6", BorelSet::closed(0.6, 1.0).unwrap());
    run_replicas_with_seeds(&cfg, &seeds(45, 20)).unwrap()
}

fn criterion_4(records: &[TrajectoryRecord]) -> Outcome {
    // E[X] = 5, E[Y] = 5/4, F(1/2) = 3/4: atom = E[F X - Y] / E[X - Y]
    let (ex, ey) = (5.0, 1.25);
    let oracle = (0.75 * ex - ey) / (ex - ey);
    let mass = mean(records.iter().map(|r| {
        let s = &r.final_state;
        s.entries.iter().filter(|e| e.0 == 0.5).map(|e| e.1).sum::<u64>() as f64 / s.total as f64
    }));
    outcome((mass - oracle).abs() < 0.02, format!("mean mass at 1/2 {mass:.5}, expected {oracle:.5} within 0.02"))
}

fn constant_over_final_half(r: &TrajectoryRecord, series: &[u64]) -> bool {
    let horizon = *r.steps.last().unwrap();
    let from = r.index_at(horizon / 2);
    series[from..].iter().all(|&v| v == series[from])
}

fn criterion_5(records: &[TrajectoryRecord]) -> Outcome {
    // ½ μ([0, 1/2]) E[X] - ½ E[F(1/2) X - Y]
    let (ex, ey) = (5.0, 1.25);
    let oracle = 0.5 * 0.75 * ex - 0.5 * (0.75 * ex - ey);
    let rate = mean(records.iter().map(|r| {
        let last = r.steps.len() - 1;
        r.observables[0].killed[last] as f64 / r.steps[last] as f64
    }));
    let high_flat = records.iter().filter(|r| constant_over_final_half(r, &r.observables[1].killed)).count();
    let above_flat = records.iter().filter(|r| constant_over_final_half(r, &r.observables[2].killed)).count();
    let n = records.len();
    outcome(
        (rate - oracle).abs() <= 0.05 * oracle && high_flat == n && above_flat == n,
        format!(
            "K_n([0,1/2])/n {rate:.5} (expected {oracle} within 5%), K_n((1/2,1]) flat in {high_flat}/{n}, \
             K_n([0.6,1]) flat in {above_flat}/{n}"
        ),
    )
}

// ---------------------------------------------------------------------------

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let horizon = 100_000u64;
    let m = fair_coin();
    let policy = RecordPolicy { stride: 1_000, full_until: horizon, growth: 0.0 };
    let run_seeds = seeds(6, 10);

    // gms(4/7): E[X] = 7/3, E[Y] = 7/4
    let law = IncrementLaw::gms(4.0 / 7.0).unwrap();
    let (ex, ey) = (7.0f64 / 3.0, 7.0f64 / 4.0);
    let drift_open = 0.25 * ex - ey;
    let drift_closed = 0.75 * ex - ey;
    let open_class = classify_left_interval(&m, &law, 0.5, false).unwrap();
    let closed_class = classify_left_interval(&m, &law, 0.5, true).unwrap();
    let classes_ok = open_class.class == Recurrence::PositiveRecurrent
        && closed_class.class == Recurrence::NullRecurrent
        && (open_class.drift.to_f64() - drift_open).abs() < 1e-12
        && (closed_class.drift.to_f64() - drift_closed).abs() < 1e-12;
    let cfg = SimConfig::new(m.clone(), law, horizon)
        .observe("open", BorelSet::left(0.5, false).unwrap())
        .observe("closed", BorelSet::left(0.5, true).unwrap())
        .record(policy);
    let records = run_replicas_with_seeds(&cfg, &run_seeds).unwrap();
    let steps = &records[0].steps;
    let ratio_at = |i: usize, k: usize| mean(records.iter().map(|r| r.observables[k].empty_epochs[i] as f64 / steps[i] as f64));
    let half = records[0].index_at(horizon / 2);
    let last = steps.len() - 1;
    let band_min = (half..=last).map(|i| ratio_at(i, 0)).fold(f64::INFINITY, f64::min);
    let (mid, end) = (ratio_at(half, 0), ratio_at(last, 0));
    let variation = (end - mid).abs() / mid;
    let null_ratio = ratio_at(last, 1);

    // gms(2/3), I = [0, 1/2]: E[X] = 3, E[Y] = 3/2, drift 3/4 > 0
    let law = IncrementLaw::gms(2.0 / 3.0).unwrap();
    let transient = classify_left_interval(&m, &law, 0.5, true).unwrap().class == Recurrence::Transient;
    let cfg = SimConfig::new(m, law, horizon).observe("closed", BorelSet::left(0.5, true).unwrap()).record(policy);
    let records = run_replicas_with_seeds(&cfg, &run_seeds).unwrap();
    let settled = records.iter().filter(|r| constant_over_final_half(r, &r.observables[0].empty_epochs)).count();

    let elapsed = start.elapsed();
    outcome(
        classes_ok && band_min > 0.05 && variation < 0.2 && null_ratio < 0.1 && transient && settled == records.len(),
        format!(
            "[0,1/2) under 4/7: min tau/n over final half {band_min:.4} (> 0.05), variation {:.1}% (< 20%); \
             [0,1/2] under 4/7: tau/n {null_ratio:.4} (< 0.1); [0,1/2] under 2/3: tau flat in {settled}/{}; \
             classes {classes_ok}/{transient}, {}",
            variation * 100.0,
            records.len(),
            secs(elapsed)
        ),
    )
}

// ---------------------------------------------------------------------------

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let m = FitnessMeasure::uniform();
    let law = IncrementLaw::bp(DiscreteLaw::Deterministic(2)).unwrap();
    // Ψ(z) = (3z/4 + 1/4)^2 = z  <=>  9z^2 - 10z + 1 = 0
    let (a, b, c) = (9.0f64, -10.0f64, 1.0f64);
    let oracle = (-b - (b * b - 4.0 * a * c).sqrt()) / (2.0 * a);
    let q = bp_extinction(&m, &law, 0.75, false, 1, 1).unwrap();
    let freq = bp_hit_zero_frequency(&m, &law, 0.75, 10_000, 2_000, 7).unwrap();
    let elapsed = start.elapsed();
    outcome(
        (q - oracle).abs() < 1e-10 && (0.09..=0.13).contains(&freq) && elapsed < Duration::from_secs(60),
        format!(
            "fixed point {q:.12} vs root {oracle:.12}; hit-zero frequency {freq:.4} in [0.09, 0.13], {}",
            secs(elapsed)
        ),
    )
}

// ---------------------------------------------------------------------------

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let horizon = 100_000u64;
    let law = IncrementLaw::bp(DiscreteLaw::zeta(2.0).unwrap()).unwrap();
    let cfg = SimConfig::new(FitnessMeasure::uniform(), law, horizon)
        .observe("low", BorelSet::closed(0.0, 0.3).unwrap())
        .record(final_only(horizon));
    let records = run_replicas_with_seeds(&cfg, &seeds(8, 10)).unwrap();
    let share = mean(records.iter().map(|r| r.observables[0].z[1] as f64 / r.z[1] as f64));
    let growth: Vec<f64> = records.iter().map(|r| r.z[1] as f64 / horizon as f64).collect();
    let mean_growth = mean(growth.iter().copied());
    let elapsed = start.elapsed();
    outcome(
        (share - 0.3).abs() < 0.03 && mean_growth > 50.0,
        format!(
            "mean Z_n([0,0.3])/Z_n {share:.4} (0.3 within 0.03), mean Z_n/n {mean_growth:.2} (> 50), \
             range [{:.2}, {:.2}], {}",
            growth.iter().copied().fold(f64::INFINITY, f64::min),
            growth.iter().copied().fold(0.0, f64::max),
            secs(elapsed)
        ),
    )
}

/// Same regime: the empirical fitness cdf against `F` itself.
fn heavy_tail_distance() -> Outcome {
    let horizon = 100_000u64;
    let m = FitnessMeasure::uniform();
    let law = IncrementLaw::bp(DiscreteLaw::zeta(2.0).unwrap()).unwrap();
    let cfg = SimConfig::new(m, law, horizon).record(final_only(horizon));
    let records = run_replicas_with_seeds(&cfg, &seeds(8, 10)).unwrap();
    // uniform target: the sup is attained at a sample point from one side
    let d = mean(records.iter().map(|r| grid_distance(&r.final_state.entries, |f| f, &[])));
    let lib = mean(records.iter().map(|r| {
        let cdf = Population::from_snapshot(&r.final_state).unwrap().empirical_cdf().unwrap();
        fitness_evo::simulate::sup_distance_to_measure(&cdf, &cfg.measure)
    }));
    outcome(d < 0.03 && lib < 0.03, format!("mean sup-distance to the fitness law {lib:.4} (grid {d:.4}), expected < 0.03"))
}

// ---------------------------------------------------------------------------

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let configs = [
        SimConfig::new(fair_coin(), IncrementLaw::gms(2.0 / 3.0).unwrap(), 20_000)
            .observe("low", BorelSet::left(0.5, true).unwrap())
            .snapshots(vec![1_000, 20_000]),
        SimConfig::new(FitnessMeasure::uniform(), IncrementLaw::markov(0.75, 0.5).unwrap(), 12_000)
            .observe("a", "[0,0.2] u {0.7}".parse().unwrap()),
        SimConfig::new(
            FitnessMeasure::new(vec![(0.1, 0.3)], vec![(0.2, 0.6, 0.7)]).unwrap(),
            IncrementLaw::joint(vec![(3, 1, 0.5), (1, 2, 0.25), (2, 2, 0.25)]).unwrap(),
            10_000,
        )
        .observe("mid", BorelSet::closed(0.2, 0.4).unwrap()),
        SimConfig::new(
            FitnessMeasure::uniform(),
            IncrementLaw::bp(DiscreteLaw::zeta(2.5).unwrap()).unwrap().with_batch(FitnessBatch::Constant),
            10_000,
        )
        .observe("low", BorelSet::closed(0.0, 0.3).unwrap()),
    ];
    let mut identical = 0;
    for (i, cfg) in configs.iter().enumerate() {
        let seed = 900 + i as u64;
        let a = run_with_seed(cfg, seed).unwrap();
        let b = run_with_seed(cfg, seed).unwrap();
        let snaps = |r: &TrajectoryRecord| r.snapshots.iter().map(|s| s.to_csv()).collect::<Vec<_>>();
        let replicas_a = run_replicas_with_seeds(cfg, &seeds(seed, 3)).unwrap();
        let replicas_b = run_replicas_with_seeds(cfg, &seeds(seed, 3)).unwrap();
        let csv = |rs: &[TrajectoryRecord]| rs.iter().map(|r| r.to_csv()).collect::<Vec<_>>();
        if a.to_csv().as_bytes() == b.to_csv().as_bytes()
            && snaps(&a) == snaps(&b)
            && a.final_state.to_csv() == b.final_state.to_csv()
            && csv(&replicas_a) == csv(&replicas_b)
        {
            identical += 1;
        }
    }
    outcome(
        identical == configs.len(),
        format!("{identical}/{} configs byte-identical on rerun, {}", configs.len(), secs(start.elapsed())),
    )
}

// ---------------------------------------------------------------------------

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let run_seeds: Vec<u64> = (0..50).collect();
    let horizon = 20_000;
    let out = counterexample_demo(4, &BorelSet::closed(0.0, 0.3).unwrap(), horizon, horizon / 10, &run_seeds).unwrap();
    let hits: Vec<_> = out.iter().filter(|o| o.max_ratio > 0.9).collect();
    let oscillating = hits.iter().filter(|o| o.later_min_ratio < 0.3 + 0.1).count();
    outcome(
        !hits.is_empty(),
        format!(
            "{} of 50 seeds reach Z_n(A)/Z_n > 0.9 after burn-in, {oscillating} of those later drop below 0.4, {}",
            hits.len(),
            secs(start.elapsed())
        ),
    )
}

// ---------------------------------------------------------------------------

fn main() -> ExitCode {
    let wanted: BTreeSet<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let run = |n: u32| wanted.is_empty() || wanted.contains(&n);
    let mut results: Vec<(u32, &str, bool, Outcome)> = Vec::new();
    let mut report = |n: u32, name: &'static str, gating: bool, o: Outcome| {
        let tag = match (o.pass, gating) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "FAIL (demonstration, not gating)",
        };
        println!("{tag} criterion {n} ({name}): {}", o.detail);
        results.push((n, name, gating, o));
    };

    if run(1) {
        report(1, "table reproduction", true, criterion_1());
    }
    if run(2) {
        report(2, "duality identity", true, criterion_2());
    }
    if run(3) {
        report(3, "shape convergence", true, criterion_3());
    }
    if run(4) || run(5) {
        let records = gms_four_fifths();
        if run(4) {
            report(4, "atom mass at f_c", true, criterion_4(&records));
        }
        if run(5) {
            report(5, "killing rates", true, criterion_5(&records));
        }
    }
    if run(6) {
        report(6, "recurrence behavior", true, criterion_6());
    }
    if run(7) {
        report(7, "branching-process extinction", true, criterion_7());
    }
    if run(8) {
        report(8, "infinite-mean regime", true, criterion_8());
        report(8, "infinite-mean regime, profile distance", true, heavy_tail_distance());
    }
    if run(9) {
        report(9, "determinism", true, criterion_9());
    }
    if run(10) {
        report(10, "counterexample demonstration", false, criterion_10());
    }

    let mut failed: Vec<u32> = results.iter().filter(|r| r.2 && !r.3.pass).map(|r| r.0).collect();
    failed.dedup();
    if failed.is_empty() {
        println!("acceptance: all checks passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
