#![no_main]

use libfuzzer_sys::fuzz_target;
use thue_core::audit::parse_corpus;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(entries) = parse_corpus(text) {
        // Accepted corpora serialize back to an equivalent corpus.
        let json = serde_json::to_string(&entries).expect("entries serialize");
        assert_eq!(parse_corpus(&json).expect("re-parses"), entries);
    }
});
