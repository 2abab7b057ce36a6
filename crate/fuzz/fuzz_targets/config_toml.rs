#![no_main]

use libfuzzer_sys::fuzz_target;
use tdho::config::{FrequencySpec, MassSpec, ProfileSource, ProfileSpec, RunConfig};

fn reads_files(p: &ProfileSpec) -> bool {
    matches!(p.mass, MassSpec::Tabulated { .. }) || matches!(p.frequency, FrequencySpec::Tabulated { .. })
}

fuzz_target!(|text: &str| {
    if let Ok(cfg) = RunConfig::from_toml_str(text) {
        if let Some(ProfileSource::Inline(p)) = &cfg.profile {
            if !reads_files(p) {
                let _ = cfg.build_profile();
            }
        }
        if let Ok(m) = cfg.metric_spec() {
            let _ = m.diffeo();
        }
    }
    let _ = ProfileSpec::from_toml_str(text);
});
