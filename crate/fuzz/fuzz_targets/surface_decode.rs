#![no_main]
use crinv::surface::{Hypersurface, RigidSurface};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = RigidSurface::decode(text) {
        // Keep the defining-function build cheap; the decoder already bounds trunc.
        if s.trunc() <= 6 {
            let _ = Hypersurface::rigid(&s);
        }
    }
});
