#![no_main]

use libfuzzer_sys::fuzz_target;
use qising_core::parse::parse_config;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = parse_config(text) {
        // re-rendering the accepted entries must parse back to the same map
        let rendered: String = cfg
            .entries()
            .iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect();
        assert_eq!(parse_config(&rendered).unwrap(), cfg);
        for key in cfg.entries().keys() {
            let _ = cfg.get_parsed::<f64>(key);
            let _ = cfg.get_bool(key);
        }
    }
});
