#![no_main]
//! Decoded series must re-encode to something that decodes to the same series.

use crinv::MultiSeries;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(s) = MultiSeries::decode(text) else { return };
    let back = MultiSeries::decode(&s.to_json_string()).expect("re-encoded series decodes");
    assert_eq!(s, back);
});
