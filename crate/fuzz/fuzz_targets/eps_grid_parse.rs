#![no_main]
use crinv::renorm::EpsGrid;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = EpsGrid::parse(text) {
        let v = g.values();
        assert!(v.iter().all(|e| e.is_finite() && *e > 0.0));
    }
});
