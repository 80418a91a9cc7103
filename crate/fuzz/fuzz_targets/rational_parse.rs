#![no_main]
use crinv::gauss::GaussRational;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = GaussRational::parse(text) {
        assert_eq!(GaussRational::parse(&g.to_string()).expect("display parses"), g);
    }
});
