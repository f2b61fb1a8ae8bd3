use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fitness_evo::analytics::analyze;
use fitness_evo::simulate::{aggregate, run_replicas, SimConfig, TrajectoryRecord};
use fitness_evo::verify::{run_suite, Suite};
use fitness_evo::ConfigFile;

mod scenario;

use scenario::{Preset, ScenarioArgs};

#[derive(Debug, Parser)]
#[command(name = "fitness-evo", version, about = "Birth/death evolution models with selection of the fittest")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the closed-form analysis of a model as JSON.
    Analyze { config: PathBuf },
    /// Simulate a model and write trajectories, snapshots and aggregates.
    Simulate {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Record every k-th step in the fully recorded prefix.
        #[arg(long, value_name = "K")]
        thin: Option<u64>,
    },
    /// Run a built-in check suite.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Run a preset model end to end.
    Scenario {
        #[arg(value_enum)]
        preset: Preset,
        #[command(flatten)]
        args: ScenarioArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: fitness_evo::Error| e.to_string())
}

/// Exit status 1: a verification check failed.
const VERIFY_FAILED: u8 = 1;
/// Exit status 2: bad usage, configuration or output location.
const USAGE: u8 = 2;

#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: USAGE, message: message.into() }
    }
}

impl From<fitness_evo::Error> for Failure {
    fn from(e: fitness_evo::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze { config } => run_analyze(&config),
        Command::Simulate { config, out, thin } => run_simulate(&config, &out, thin),
        Command::Verify { suite, seed } => run_verify(suite, seed),
        Command::Scenario { preset, args, out } => scenario::run(preset, &args, &out).map(print_manifest),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run_analyze(path: &Path) -> Result<(), Failure> {
    let (m, law) = ConfigFile::load(path)?.model()?;
    let report = analyze(&m, &law)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(())
}

fn run_simulate(path: &Path, out: &Path, thin: Option<u64>) -> Result<(), Failure> {
    let mut cfg = ConfigFile::load(path)?.simulation().map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    if let Some(k) = thin {
        if k == 0 {
            return Err(Failure::usage("--thin must be positive"));
        }
        cfg.record.stride = k;
    }
    print_manifest(write_simulation(&cfg, out)?);
    Ok(())
}

fn run_verify(suite: Suite, seed: u64) -> Result<(), Failure> {
    let report = run_suite(suite, seed)?;
    println!("{report}");
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure { code: VERIFY_FAILED, message: format!("suite {suite} failed") })
    }
}

fn print_manifest(files: Vec<PathBuf>) {
    for f in files {
        println!("{}", f.display());
    }
}

pub fn prepare_dir(out: &Path) -> Result<(), Failure> {
    fs::create_dir_all(out).map_err(|e| Failure::usage(format!("{}: {e}", out.display())))
}

pub fn write_file(path: PathBuf, contents: &str) -> Result<PathBuf, Failure> {
    fs::write(&path, contents).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Ok(path)
}

/// Runs all replicas of `cfg` and writes `trajectory_rNNN.csv`,
/// `snapshot_rNNN_nSTEP.csv` and `aggregate.json` into `out`.
pub fn write_simulation(cfg: &SimConfig, out: &Path) -> Result<Vec<PathBuf>, Failure> {
    Ok(write_simulation_records(cfg, out)?.0)
}

pub fn write_simulation_records(cfg: &SimConfig, out: &Path) -> Result<(Vec<PathBuf>, Vec<TrajectoryRecord>), Failure> {
    prepare_dir(out)?;
    let records = run_replicas(cfg)?;
    let mut files = Vec::new();
    for (r, rec) in records.iter().enumerate() {
        files.push(write_file(out.join(format!("trajectory_r{r:03}.csv")), &rec.to_csv())?);
        for snap in &rec.snapshots {
            files.push(write_file(out.join(format!("snapshot_r{r:03}_n{}.csv", snap.step)), &snap.to_csv())?);
        }
    }
    let agg = aggregate(&records, &cfg.measure, &cfg.law);
    let json = serde_json::to_string_pretty(&agg).expect("aggregate serializes");
    files.push(write_file(out.join("aggregate.json"), &json)?);
    Ok((files, records))
}
