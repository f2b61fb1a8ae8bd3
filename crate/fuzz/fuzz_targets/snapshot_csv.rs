#![no_main]

use fitness_evo::{Population, Snapshot};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(snap) = Snapshot::parse(text) else { return };
    assert_eq!(Snapshot::parse(&snap.to_csv()).unwrap(), snap);
    let pop = Population::from_snapshot(&snap).expect("parsed snapshot is valid");
    assert_eq!(pop.total(), snap.total);
});
