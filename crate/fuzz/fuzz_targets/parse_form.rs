#![no_main]

use libfuzzer_sys::fuzz_target;
use thue_core::BinaryForm;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(form) = text.parse::<BinaryForm>() {
        // Display output re-parses to the same form.
        let again: BinaryForm = form.to_string().parse().expect("display re-parses");
        assert_eq!(again, form);
        if form.degree() <= 12 && form.coeffs().iter().all(|c| c.bits() <= 256) {
            let _ = form.discriminant();
        }
    }
});
