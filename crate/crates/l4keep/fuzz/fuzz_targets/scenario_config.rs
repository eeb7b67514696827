//! Scenario config parser must never panic on arbitrary bytes, and every
//! config that validates must survive a serialize → parse round trip
//! unchanged.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(cfg) = l4keep::scenario::parse_scenario_str(text) else {
        return;
    };
    if cfg.prepare().is_ok() {
        let json = serde_json::to_string(&cfg).expect("validated config serializes");
        let back = l4keep::scenario::parse_scenario_str(&json).expect("round trip re-parses");
        assert_eq!(back, cfg, "config changed across serialize/parse");
    }
});
