#![no_main]

use libfuzzer_sys::fuzz_target;
use qising_core::parse::parse_band_set_json;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(set) = parse_band_set_json(text) {
        for w in set.intervals().windows(2) {
            assert!(w[0].1 < w[1].0, "intervals overlap or touch");
        }
        let again = parse_band_set_json(&serde_json::to_string(&set).unwrap()).unwrap();
        assert_eq!(again, set);
    }
});
