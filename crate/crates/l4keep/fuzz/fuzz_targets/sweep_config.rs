//! Sweep config parser must never panic on arbitrary bytes. Valid configs
//! must round-trip through JSON unchanged, and their grid enumeration must
//! match the declared axis counts.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(cfg) = l4keep::scenario::parse_sweep_str(text) else {
        return;
    };
    if cfg.prepare().is_ok() {
        let json = serde_json::to_string(&cfg).expect("validated config serializes");
        let back = l4keep::scenario::parse_sweep_str(&json).expect("round trip re-parses");
        assert_eq!(back, cfg, "config changed across serialize/parse");

        let expected: usize = [
            &cfg.grid.rx,
            &cfg.grid.ry,
            &cfg.grid.rz,
            &cfg.grid.vx,
            &cfg.grid.vy,
            &cfg.grid.vz,
        ]
        .iter()
        .map(|axis| axis.map_or(1, |a| a.count))
        .product();
        assert_eq!(cfg.grid_points().len(), expected, "grid size mismatch");
    }
});
