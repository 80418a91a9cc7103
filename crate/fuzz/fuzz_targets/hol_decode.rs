#![no_main]
use crinv::surface::HolPoly;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    if let Ok(h) = HolPoly::decode(1 + (n % 4) as usize, text) {
        let re = h.real_part2(6);
        assert!(re.is_real());
    }
});
