#![no_main]

use libfuzzer_sys::fuzz_target;
use prdepth::io::parse_real_list;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(v) = parse_real_list(text) {
        assert!(!v.is_empty() && v.iter().all(|x| x.is_finite()));
    }
});
