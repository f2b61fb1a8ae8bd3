//! JSON model and run configuration.
//!
//! ```json
//! {
//!   "measure": { "atoms": [[0.5, 0.5]], "uniform_pieces": [[0.0, 1.0, 0.5]] },
//!   "increments": { "kind": "gms", "p": 0.6666666666666666 },
//!   "horizon": 200000,
//!   "observables": [{ "name": "low", "set": "[0,0.5]" }],
//!   "snapshot_times": [100000],
//!   "seed": 7,
//!   "replicas": 20
//! }
//! ```
//!
//! `increments.kind` is one of `gms {p}`, `markov {p, q}`, `bp {x}`,
//! `product {x, y}` or `joint {rows: [[x, y, prob], ...]}`, with an optional
//! `"fitness_batch": "iid" | "constant"`. Single laws are written
//! `{"deterministic": n}`, `{"geometric": r}`, `{"table": [[v, prob], ...]}`
//! or `{"zeta": s}`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::increments::{DiscreteLaw, FitnessBatch, IncrementKind, IncrementLaw};
use crate::measure::{BorelSet, FitnessMeasure};
use crate::simulate::{Observable, RecordPolicy, SimConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    #[serde(default)]
    pub atoms: Vec<(f64, f64)>,
    #[serde(default)]
    pub uniform_pieces: Vec<(f64, f64, f64)>,
}

impl MeasureSpec {
    pub fn build(&self) -> Result<FitnessMeasure> {
        FitnessMeasure::new(self.atoms.clone(), self.uniform_pieces.clone())
    }
}

impl From<&FitnessMeasure> for MeasureSpec {
    fn from(m: &FitnessMeasure) -> Self {
        MeasureSpec {
            atoms: m.atoms().iter().map(|a| (a.location, a.mass)).collect(),
            uniform_pieces: m.pieces().iter().map(|p| (p.lo, p.hi, p.weight)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DiscreteSpec {
    Deterministic(u64),
    Geometric(f64),
    Table(Vec<(u64, f64)>),
    Zeta(f64),
}

impl DiscreteSpec {
    pub fn build(&self) -> Result<DiscreteLaw> {
        match self {
            DiscreteSpec::Deterministic(n) => Ok(DiscreteLaw::Deterministic(*n)),
            DiscreteSpec::Geometric(r) => DiscreteLaw::geometric(*r),
            DiscreteSpec::Table(t) => DiscreteLaw::table(t.clone()),
            DiscreteSpec::Zeta(s) => DiscreteLaw::zeta(*s),
        }
    }
}

impl From<&DiscreteLaw> for DiscreteSpec {
    fn from(l: &DiscreteLaw) -> Self {
        match l {
            DiscreteLaw::Geometric(r) => DiscreteSpec::Geometric(*r),
            DiscreteLaw::Deterministic(n) => DiscreteSpec::Deterministic(*n),
            DiscreteLaw::Table(t) => DiscreteSpec::Table(t.clone()),
            DiscreteLaw::Zeta(s) => DiscreteSpec::Zeta(*s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum IncrementSpec {
    Gms {
        p: f64,
        #[serde(default)]
        fitness_batch: FitnessBatch,
    },
    Markov {
        p: f64,
        q: f64,
        #[serde(default)]
        fitness_batch: FitnessBatch,
    },
    Bp {
        x: DiscreteSpec,
        #[serde(default)]
        fitness_batch: FitnessBatch,
    },
    Product {
        x: DiscreteSpec,
        y: DiscreteSpec,
        #[serde(default)]
        fitness_batch: FitnessBatch,
    },
    Joint {
        rows: Vec<(u64, u64, f64)>,
        #[serde(default)]
        fitness_batch: FitnessBatch,
    },
}

impl IncrementSpec {
    pub fn build(&self) -> Result<IncrementLaw> {
        let (kind, batch) = match self {
            IncrementSpec::Gms { p, fitness_batch } => (IncrementKind::Gms { p: *p }, *fitness_batch),
            IncrementSpec::Markov { p, q, fitness_batch } => (IncrementKind::Markov { p: *p, q: *q }, *fitness_batch),
            IncrementSpec::Bp { x, fitness_batch } => (IncrementKind::Bp { x: x.build()? }, *fitness_batch),
            IncrementSpec::Product { x, y, fitness_batch } => {
                (IncrementKind::Product { x: x.build()?, y: y.build()? }, *fitness_batch)
            }
            IncrementSpec::Joint { rows, fitness_batch } => (IncrementKind::Joint(rows.clone()), *fitness_batch),
        };
        IncrementLaw::new(kind, batch)
    }
}

impl From<&IncrementLaw> for IncrementSpec {
    fn from(law: &IncrementLaw) -> Self {
        let fitness_batch = law.batch();
        match law.kind() {
            IncrementKind::Gms { p } => IncrementSpec::Gms { p: *p, fitness_batch },
            IncrementKind::Markov { p, q } => IncrementSpec::Markov { p: *p, q: *q, fitness_batch },
            IncrementKind::Bp { x } => IncrementSpec::Bp { x: x.into(), fitness_batch },
            IncrementKind::Product { x, y } => IncrementSpec::Product { x: x.into(), y: y.into(), fitness_batch },
            IncrementKind::Joint(rows) => IncrementSpec::Joint { rows: rows.clone(), fitness_batch },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableSpec {
    pub name: String,
    /// Set syntax accepted by [`BorelSet`]'s `FromStr`.
    pub set: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordSpec {
    #[serde(default = "one")]
    pub stride: u64,
    #[serde(default = "full_until")]
    pub full_until: u64,
    #[serde(default = "growth")]
    pub growth: f64,
}

fn one() -> u64 {
    1
}
fn full_until() -> u64 {
    RecordPolicy::default().full_until
}
fn growth() -> f64 {
    RecordPolicy::default().growth
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub measure: MeasureSpec,
    pub increments: IncrementSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u64>,
    #[serde(default)]
    pub observables: Vec<ObservableSpec>,
    #[serde(default)]
    pub snapshot_times: Vec<u64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one_replica")]
    pub replicas: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record: Option<RecordSpec>,
}

fn one_replica() -> usize {
    1
}

impl ConfigFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads and parses `path`; every error message names the path.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config values serialize")
    }

    pub fn model(&self) -> Result<(FitnessMeasure, IncrementLaw)> {
        let m = self.measure.build().map_err(|e| Error::Config(format!("measure: {e}")))?;
        let law = self.increments.build().map_err(|e| Error::Config(format!("increments: {e}")))?;
        Ok((m, law))
    }

    pub fn simulation(&self) -> Result<SimConfig> {
        let (m, law) = self.model()?;
        let horizon = self.horizon.ok_or_else(|| Error::Config("horizon: required to simulate".into()))?;
        let observables = self
            .observables
            .iter()
            .enumerate()
            .map(|(i, o)| {
                let set: BorelSet =
                    o.set.parse().map_err(|e| Error::Config(format!("observables[{i}].set: {e}")))?;
                Ok(Observable::new(o.name.clone(), set))
            })
            .collect::<Result<Vec<_>>>()?;
        let record = self
            .record
            .map(|r| RecordPolicy { stride: r.stride, full_until: r.full_until, growth: r.growth })
            .unwrap_or_default();
        if record.stride == 0 {
            return Err(Error::Config("record.stride: must be positive".into()));
        }
        let cfg = SimConfig {
            measure: m,
            law,
            horizon,
            observables,
            snapshot_times: self.snapshot_times.clone(),
            seed: self.seed,
            replicas: self.replicas,
            record,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Config for `cfg`, with sets written in their canonical form.
    pub fn from_simulation(cfg: &SimConfig) -> Self {
        let default = RecordPolicy::default();
        ConfigFile {
            measure: (&cfg.measure).into(),
            increments: (&cfg.law).into(),
            horizon: Some(cfg.horizon),
            observables: cfg
                .observables
                .iter()
                .map(|o| ObservableSpec { name: o.name.clone(), set: o.set.to_string() })
                .collect(),
            snapshot_times: cfg.snapshot_times.clone(),
            seed: cfg.seed,
            replicas: cfg.replicas,
            record: (cfg.record != default).then_some(RecordSpec {
                stride: cfg.record.stride,
                full_until: cfg.record.full_until,
                growth: cfg.record.growth,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = r#"{
        "measure": {"atoms": [[0.5, 0.5]], "uniform_pieces": [[0.0, 1.0, 0.5]]},
        "increments": {"kind": "gms", "p": 0.6666666666666666},
        "horizon": 1000,
        "observables": [{"name": "low", "set": "[0,0.5]"}, {"name": "high", "set": "(0.5,1]"}],
        "snapshot_times": [500],
        "seed": 7,
        "replicas": 3
    }"#;

    #[test]
    fn parses_full_config() {
        let c = ConfigFile::from_json(FULL).unwrap();
        let sim = c.simulation().unwrap();
        assert_eq!(sim.horizon, 1000);
        assert_eq!(sim.replicas, 3);
        assert_eq!(sim.observables[1].set, "(0.5,1]".parse().unwrap());
        assert_eq!(sim.law, IncrementLaw::gms(2.0 / 3.0).unwrap());
        assert_eq!(sim.measure, FitnessMeasure::atom_mixture(0.5, 0.5).unwrap());
        assert_eq!(ConfigFile::from_simulation(&sim), c);
    }

    #[test]
    fn all_increment_kinds() {
        for inc in [
            r#"{"kind": "markov", "p": 0.75, "q": 0.5}"#,
            r#"{"kind": "bp", "x": {"deterministic": 2}}"#,
            r#"{"kind": "bp", "x": {"zeta": 2.0}, "fitness_batch": "constant"}"#,
            r#"{"kind": "product", "x": {"geometric": 0.25}, "y": {"table": [[1, 0.5], [2, 0.5]]}}"#,
            r#"{"kind": "joint", "rows": [[2, 1, 0.5], [1, 1, 0.5]]}"#,
        ] {
            let text = format!(r#"{{"measure": {{"uniform_pieces": [[0, 1, 1]]}}, "increments": {inc}}}"#);
            let c = ConfigFile::from_json(&text).unwrap();
            let (_, law) = c.model().unwrap();
            assert_eq!(IncrementSpec::from(&law).build().unwrap(), law);
            assert_eq!(ConfigFile::from_json(&c.to_json()).unwrap(), c);
        }
    }

    #[test]
    fn errors_name_the_field() {
        let bad_set = FULL.replace("(0.5,1]", "(0.5,2]");
        let e = ConfigFile::from_json(&bad_set).unwrap().simulation().unwrap_err().to_string();
        assert!(e.contains("observables[1].set"), "{e}");
        let bad_p = FULL.replace("0.6666666666666666", "1.5");
        let e = ConfigFile::from_json(&bad_p).unwrap().model().unwrap_err().to_string();
        assert!(e.contains("increments"), "{e}");
        let bad_mass = FULL.replace("[[0.5, 0.5]]", "[[0.5, 0.4]]");
        assert!(ConfigFile::from_json(&bad_mass).unwrap().model().unwrap_err().to_string().contains("measure"));
        assert!(ConfigFile::from_json(&FULL.replace("\"seed\"", "\"sed\"")).is_err());
        assert!(ConfigFile::from_json(&FULL.replace("\"gms\"", "\"gsm\"")).is_err());
        let no_horizon = FULL.replace("\"horizon\": 1000,", "");
        let c = ConfigFile::from_json(&no_horizon).unwrap();
        assert!(c.model().is_ok());
        assert!(c.simulation().unwrap_err().to_string().contains("horizon"));
    }

    #[test]
    fn load_names_missing_path() {
        let e = ConfigFile::load("/nonexistent/model.json").unwrap_err().to_string();
        assert!(e.contains("/nonexistent/model.json"), "{e}");
    }
}
