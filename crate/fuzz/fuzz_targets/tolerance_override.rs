#![no_main]

use libfuzzer_sys::fuzz_target;
use tdho::config::{parse_tolerance_override, Tolerances};

fuzz_target!(|text: &str| {
    if let Ok((name, value)) = parse_tolerance_override(text) {
        assert!(value > 0.0 && value.is_finite());
        let _ = Tolerances::default().set(&name, value);
    }
});
