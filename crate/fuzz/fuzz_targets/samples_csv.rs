#![no_main]

use libfuzzer_sys::fuzz_target;
use tdho::profiles::{read_samples_csv, OscillatorProfile};

fuzz_target!(|text: &str| {
    if let Ok(samples) = read_samples_csv(text) {
        if let Ok(p) = OscillatorProfile::tabulated(&samples, &samples) {
            let dom = p.domain();
            let _ = p.eval(0.5 * (dom.start + dom.end));
        }
    }
});
