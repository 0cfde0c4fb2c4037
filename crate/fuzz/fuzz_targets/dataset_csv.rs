#![no_main]

use libfuzzer_sys::fuzz_target;
use prdepth::io::{parse_dataset, write_dataset};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for intercept in [true, false] {
        if let Ok(ds) = parse_dataset(text, intercept) {
            // accepted input survives a write/parse round trip
            let again = parse_dataset(&write_dataset(&ds), intercept).expect("round trip");
            assert_eq!(again, ds);
        }
    }
});
