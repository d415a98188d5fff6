#![no_main]

use libfuzzer_sys::fuzz_target;
use qising_core::parse::parse_word;
use qising_core::sequences::letter_counts;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(w) = parse_word(text) {
        assert_eq!(w.to_string(), text.trim());
        let (a, b) = letter_counts(&w);
        assert_eq!(a + b, w.len());
    }
});
