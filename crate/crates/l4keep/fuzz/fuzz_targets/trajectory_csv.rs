//! Trajectory CSV parser must never panic on arbitrary bytes. Anything it
//! accepts must reach a formatting fixed point: format(parse(x)) must
//! re-parse and re-format to the identical string (string comparison keeps
//! the check meaningful for NaN fields, which are never equal to
//! themselves).

#![no_main]

use libfuzzer_sys::fuzz_target;

use l4keep::scenario::{format_trajectory_csv, parse_trajectory_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(samples) = parse_trajectory_csv(data) else {
        return;
    };
    let canonical = format_trajectory_csv(&samples);
    let reparsed =
        parse_trajectory_csv(canonical.as_bytes()).expect("canonical CSV output must re-parse");
    assert_eq!(
        format_trajectory_csv(&reparsed),
        canonical,
        "CSV canonical form is not a fixed point"
    );
});
