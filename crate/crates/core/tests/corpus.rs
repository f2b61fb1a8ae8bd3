//! Replays the checked-in fuzz seeds through the same invariants the fuzz
//! targets assert, so they run on stable without libFuzzer.

use std::fs;
use std::path::PathBuf;

use fitness_evo::config::MeasureSpec;
use fitness_evo::{BorelSet, ConfigFile, Population, Snapshot};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let path = e.unwrap().path();
            (path.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn config_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("config_json") {
        let Ok(file) = ConfigFile::from_json(&text) else { continue };
        let _ = file.model();
        if let Ok(cfg) = file.simulation() {
            assert_eq!(ConfigFile::from_simulation(&cfg).simulation().unwrap(), cfg, "{name}");
            accepted += 1;
        }
    }
    assert!(accepted >= 5, "{accepted}");
}

#[test]
fn borel_set_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("borel_set") {
        let Ok(set) = text.parse::<BorelSet>() else { continue };
        assert_eq!(set.to_string().parse::<BorelSet>().unwrap(), set, "{name}");
        accepted += 1;
    }
    assert!(accepted >= 5, "{accepted}");
}

#[test]
fn snapshot_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("snapshot_csv") {
        let Ok(snap) = Snapshot::parse(&text) else { continue };
        assert_eq!(Snapshot::parse(&snap.to_csv()).unwrap(), snap, "{name}");
        assert_eq!(Population::from_snapshot(&snap).unwrap().total(), snap.total, "{name}");
        accepted += 1;
    }
    assert_eq!(accepted, 3);
}

#[test]
fn measure_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("measure_json") {
        let Ok(spec) = serde_json::from_str::<MeasureSpec>(&text) else { continue };
        let Ok(m) = spec.build() else { continue };
        assert!((m.cdf(1.0).unwrap() - 1.0).abs() < 1e-12, "{name}");
        accepted += 1;
    }
    assert_eq!(accepted, 3);
}
