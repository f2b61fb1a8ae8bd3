use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use fitness_evo::analytics::{analyze, bp_extinction, critical_fitness};
use fitness_evo::simulate::{
    bp_hit_zero_frequency, build_counterexample_law, counterexample_demo, replica_seed, sup_distance_to_measure,
    DemoOutcome, SimConfig, TrajectoryRecord,
};
use fitness_evo::{BorelSet, ConfigFile, DiscreteLaw, FitnessMeasure, IncrementLaw, Population};
use serde::Serialize;

use crate::{prepare_dir, write_file, write_simulation_records, Failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Geometric stretches, X ~ G(1-p), Y ~ G(p), p in (1/2, 1).
    GmsTable,
    /// Two-state chain stretches, X ~ G(1-p), Y ~ G(1-q).
    MarkovTable,
    /// X ≡ 2, Y ≡ 1: extinction of the low-fitness branching process.
    BpDemo,
    /// Zeta(2) birth batches with infinite mean, Y ≡ 1.
    HeavyTail,
    /// Batch-constant births whose latest batch dominates.
    Counterexample,
}

#[derive(Debug, Clone, Args)]
pub struct ScenarioArgs {
    /// Accepts a decimal or a fraction such as 8/15.
    #[arg(long, value_parser = parse_number)]
    p: Option<f64>,
    #[arg(long, value_parser = parse_number)]
    q: Option<f64>,
    #[arg(long)]
    k_max: Option<u32>,
    #[arg(long)]
    horizon: Option<u64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    replicas: Option<usize>,
}

fn parse_number(s: &str) -> Result<f64, String> {
    let bad = || format!("{s:?} is not a number or fraction");
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (f64, f64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            if b == 0.0 {
                return Err(bad());
            }
            Ok(a / b)
        }
        None => s.trim().parse().map_err(|_| bad()),
    }
}

fn fair_coin() -> FitnessMeasure {
    FitnessMeasure::atom_mixture(0.5, 0.5).expect("valid mixture")
}

pub fn run(preset: Preset, args: &ScenarioArgs, out: &Path) -> Result<Vec<PathBuf>, Failure> {
    prepare_dir(out)?;
    match preset {
        Preset::GmsTable => {
            let p = args.p.unwrap_or(2.0 / 3.0);
            if !(p > 0.5 && p < 1.0) {
                return Err(Failure::usage(format!("--p {p} outside (1/2, 1)")));
            }
            table_scenario(fair_coin(), IncrementLaw::gms(p)?, args, out)
        }
        Preset::MarkovTable => {
            let law = IncrementLaw::markov(args.p.unwrap_or(0.75), args.q.unwrap_or(0.5))?;
            table_scenario(fair_coin(), law, args, out)
        }
        Preset::BpDemo => bp_demo(args, out),
        Preset::HeavyTail => heavy_tail(args, out),
        Preset::Counterexample => counterexample(args, out),
    }
}

fn write_json(out: &Path, name: &str, value: &impl Serialize) -> Result<PathBuf, Failure> {
    write_file(out.join(name), &serde_json::to_string_pretty(value).expect("value serializes"))
}

fn write_model(cfg: &SimConfig, out: &Path) -> Result<Vec<PathBuf>, Failure> {
    Ok(vec![
        write_file(out.join("config.json"), &ConfigFile::from_simulation(cfg).to_json())?,
        write_json(out, "analysis.json", &analyze(&cfg.measure, &cfg.law)?)?,
    ])
}

fn table_scenario(m: FitnessMeasure, law: IncrementLaw, args: &ScenarioArgs, out: &Path) -> Result<Vec<PathBuf>, Failure> {
    let horizon = args.horizon.unwrap_or(20_000);
    let mut cfg = SimConfig::new(m.clone(), law.clone(), horizon)
        .seed(args.seed)
        .replicas(args.replicas.unwrap_or(1))
        .snapshots(vec![horizon]);
    match critical_fitness(&m, &law).finite() {
        Some(fc) => {
            cfg = cfg
                .observe("below_fc", BorelSet::left(fc, false)?)
                .observe("at_fc", BorelSet::singleton(fc)?)
                .observe("above_fc", BorelSet::right(fc, false)?);
        }
        None => cfg = cfg.observe("all", BorelSet::unit()),
    }
    let mut files = write_model(&cfg, out)?;
    files.extend(write_simulation_records(&cfg, out)?.0);
    Ok(files)
}

#[derive(Serialize)]
struct BpSummary {
    fitness: f64,
    births_per_cycle: u64,
    extinction_probability: f64,
    hit_zero_frequency: f64,
    replicas: usize,
    horizon: u64,
    seed: u64,
}

fn bp_demo(args: &ScenarioArgs, out: &Path) -> Result<Vec<PathBuf>, Failure> {
    let (f, x) = (0.75, 2);
    let m = FitnessMeasure::uniform();
    let law = IncrementLaw::bp(DiscreteLaw::Deterministic(x))?;
    let replicas = args.replicas.unwrap_or(10_000);
    let horizon = args.horizon.unwrap_or(2_000);
    let cfg = SimConfig::new(m.clone(), law.clone(), horizon).seed(args.seed).observe("low", BorelSet::left(f, true)?);
    let summary = BpSummary {
        fitness: f,
        births_per_cycle: x,
        extinction_probability: bp_extinction(&m, &law, f, false, 1, 1)?,
        hit_zero_frequency: bp_hit_zero_frequency(&m, &law, f, replicas, horizon, args.seed)?,
        replicas,
        horizon,
        seed: args.seed,
    };
    let mut files = write_model(&cfg, out)?;
    files.push(write_json(out, "bp.json", &summary)?);
    Ok(files)
}

#[derive(Serialize)]
struct HeavyTailReplica {
    seed: u64,
    growth: f64,
    low_share: f64,
    sup_distance_to_fitness_law: Option<f64>,
}

fn heavy_tail(args: &ScenarioArgs, out: &Path) -> Result<Vec<PathBuf>, Failure> {
    let horizon = args.horizon.unwrap_or(100_000);
    let law = IncrementLaw::bp(DiscreteLaw::zeta(2.0)?)?;
    let cfg = SimConfig::new(FitnessMeasure::uniform(), law, horizon)
        .seed(args.seed)
        .replicas(args.replicas.unwrap_or(1))
        .observe("low", BorelSet::closed(0.0, 0.3)?)
        .snapshots(vec![horizon]);
    let mut files = write_model(&cfg, out)?;
    let (sim_files, records) = write_simulation_records(&cfg, out)?;
    files.extend(sim_files);
    let summary: Vec<HeavyTailReplica> = records.iter().map(|r| heavy_tail_row(&cfg, r)).collect();
    files.push(write_json(out, "heavy_tail.json", &summary)?);
    Ok(files)
}

fn heavy_tail_row(cfg: &SimConfig, r: &TrajectoryRecord) -> HeavyTailReplica {
    let last = r.steps.len() - 1;
    let z = r.z[last] as f64;
    let cdf = Population::from_snapshot(&r.final_state).ok().and_then(|p| p.empirical_cdf().ok());
    HeavyTailReplica {
        seed: r.seed,
        growth: z / r.steps[last] as f64,
        low_share: if z > 0.0 { r.observables[0].z[last] as f64 / z } else { 0.0 },
        sup_distance_to_fitness_law: cdf.map(|c| sup_distance_to_measure(&c, &cfg.measure)),
    }
}

#[derive(Serialize)]
struct CounterexampleSummary {
    k_max: u32,
    tau: Vec<u64>,
    batch_sizes: Vec<u64>,
    set: String,
    horizon: u64,
    burn_in: u64,
    runs_above_0_9: usize,
    outcomes: Vec<DemoOutcome>,
}

fn counterexample(args: &ScenarioArgs, out: &Path) -> Result<Vec<PathBuf>, Failure> {
    let k_max = args.k_max.unwrap_or(4);
    let horizon = args.horizon.unwrap_or(20_000);
    let runs = args.replicas.unwrap_or(50);
    let ce = build_counterexample_law(k_max)?;
    let set = BorelSet::closed(0.0, 0.3)?;
    let seeds: Vec<u64> = (0..runs as u64).map(|r| replica_seed(args.seed, r)).collect();
    let burn_in = horizon / 10;
    let outcomes = counterexample_demo(k_max, &set, horizon, burn_in, &seeds)?;
    let cfg = SimConfig::new(FitnessMeasure::uniform(), ce.law.clone(), horizon)
        .seed(args.seed)
        .observe("a", set.clone());
    let summary = CounterexampleSummary {
        k_max,
        tau: ce.tau,
        batch_sizes: ce.batch_sizes,
        set: set.to_string(),
        horizon,
        burn_in,
        runs_above_0_9: outcomes.iter().filter(|o| o.max_ratio > 0.9).count(),
        outcomes,
    };
    let mut files = write_model(&cfg, out)?;
    files.push(write_json(out, "counterexample.json", &summary)?);
    Ok(files)
}
