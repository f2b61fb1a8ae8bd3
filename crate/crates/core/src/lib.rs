//! Evolution of a population of species with random fitness: batches of
//! births drawn from a fitness law, bulk removal of the least fit.
//!
//! [`analytics`] computes the closed-form limit objects, [`simulate`] runs
//! the process, and [`verify`] checks the two against each other.

pub mod analytics;
pub mod config;
pub mod error;
pub mod extended;
pub mod increments;
pub mod measure;
pub mod population;
pub mod simulate;
pub mod verify;

pub use config::ConfigFile;
pub use error::{Error, Regime, Result};
pub use extended::{ExtReal, TOLERANCE};
pub use increments::{DiscreteLaw, FitnessBatch, IncrementKind, IncrementLaw};
pub use measure::{BorelSet, FitnessMeasure, Interval};
pub use population::{EmpiricalCdf, KillReport, Population, Snapshot};
