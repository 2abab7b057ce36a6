//! Replays the checked-in fuzz seed corpora through the parser entry points.

use std::fs;
use std::path::PathBuf;

use tdho::config::{parse_tolerance_override, ProfileSpec, RunConfig};
use tdho::profiles::read_samples_csv;
use tdho::ErrorCategory;

fn corpus(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut entries: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .collect();
    entries.sort();
    assert!(!entries.is_empty());
    entries
        .into_iter()
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read_to_string(&p).unwrap(),
            )
        })
        .collect()
}

#[test]
fn config_seeds_parse() {
    for (name, text) in corpus("config_toml") {
        let cfg = RunConfig::from_toml_str(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(cfg.tolerances.det, 1e-8, "{name}");
        if let Err(e) = ProfileSpec::from_toml_str(&text) {
            assert_eq!(e.category(), ErrorCategory::Config);
        }
    }
}

#[test]
fn csv_seeds_parse_or_fail_cleanly() {
    for (name, text) in corpus("samples_csv") {
        match read_samples_csv(&text) {
            Ok(rows) => assert!(rows.len() >= 2, "{name}"),
            Err(e) => panic!("{name}: {e}"),
        }
    }
}

#[test]
fn tolerance_seeds() {
    let parsed: Vec<_> = corpus("tolerance_override")
        .into_iter()
        .map(|(name, text)| (name, parse_tolerance_override(&text).ok()))
        .collect();
    for (name, result) in parsed {
        assert_eq!(result.is_none(), name == "negative", "{name}");
    }
}
