#![no_main]

use libfuzzer_sys::fuzz_target;
use thue_core::numeric::{decimal_of_rational, parse_rational};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    // Exponents are unbounded in the grammar; keep the rendering step cheap.
    if text.len() > 64 {
        return;
    }
    if let Some(r) = parse_rational(text) {
        if r.numer().bits() + r.denom().bits() < 4096 {
            let down = decimal_of_rational(&r, 30, false);
            let up = decimal_of_rational(&r, 30, true);
            let (lo, hi) = (parse_rational(&down).unwrap(), parse_rational(&up).unwrap());
            assert!(lo <= r && r <= hi);
        }
    }
});
