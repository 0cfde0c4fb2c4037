//! Replays the checked-in fuzz seeds through the parsers with the same
//! assertions the fuzz targets make.

use std::fs;
use std::path::PathBuf;

use prdepth::io::{parse_config, parse_dataset, parse_real_list, write_dataset};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            let bytes = fs::read(&path).unwrap();
            (path.display().to_string(), String::from_utf8_lossy(&bytes).into_owned())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn dataset_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("dataset_csv") {
        for intercept in [true, false] {
            if let Ok(ds) = parse_dataset(&text, intercept) {
                let again = parse_dataset(&write_dataset(&ds), intercept).unwrap();
                assert_eq!(again, ds, "{name}");
                accepted += 1;
            }
        }
    }
    assert!(accepted > 0);
}

#[test]
fn config_seeds() {
    for (_, text) in seeds("config_kv") {
        if let Ok(map) = parse_config(&text) {
            assert!(map.iter().all(|(k, v)| !k.is_empty() && !v.is_empty()));
        }
    }
}

#[test]
fn real_list_seeds() {
    for (_, text) in seeds("real_list") {
        if let Ok(v) = parse_real_list(&text) {
            assert!(!v.is_empty() && v.iter().all(|x| x.is_finite()));
        }
    }
}
