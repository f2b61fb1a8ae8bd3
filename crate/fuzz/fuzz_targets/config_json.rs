#![no_main]

use fitness_evo::ConfigFile;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(file) = ConfigFile::from_json(text) else { return };
    let _ = file.model();
    if let Ok(cfg) = file.simulation() {
        let back = ConfigFile::from_simulation(&cfg);
        assert_eq!(back.simulation().unwrap(), cfg);
    }
});
