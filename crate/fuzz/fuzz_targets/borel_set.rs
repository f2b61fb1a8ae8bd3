#![no_main]

use fitness_evo::BorelSet;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(set) = text.parse::<BorelSet>() else { return };
    let again: BorelSet = set.to_string().parse().expect("display output parses");
    assert_eq!(again, set);
});
