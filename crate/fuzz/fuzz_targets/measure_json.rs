#![no_main]

use fitness_evo::config::MeasureSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(spec) = serde_json::from_slice::<MeasureSpec>(data) else { return };
    let Ok(m) = spec.build() else { return };
    let mut last = 0.0;
    for i in 0..=64 {
        let c = m.cdf(i as f64 / 64.0).expect("grid point in [0, 1]");
        assert!((0.0..=1.0 + 1e-9).contains(&c) && c + 1e-12 >= last);
        last = c;
    }
});
