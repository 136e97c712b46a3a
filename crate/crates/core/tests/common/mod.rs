#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use trialbandit::{ColumnMapping, ExperimentConfig, PolicyKind, SyntheticSpec};

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn ist_mapping() -> ColumnMapping {
    let map = |pairs: &[(&str, u8)]| -> BTreeMap<String, u8> {
        pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    };
    let mut values = BTreeMap::new();
    values.insert("RXASP".to_string(), map(&[("Y", 1), ("N", 0)]));
    values.insert("RXHEP".to_string(), map(&[("H", 1), ("M", 1), ("L", 1), ("N", 0)]));
    values.insert("RATRIAL".to_string(), map(&[("Y", 1), ("N", 0)]));
    values.insert("ID14".to_string(), map(&[("1", 1), ("0", 0)]));
    ColumnMapping {
        aspirin_col: "RXASP".into(),
        heparin_col: "RXHEP".into(),
        outcome_col: "ID14".into(),
        context_cols: vec!["RATRIAL".into()],
        values,
        missing_values: Vec::new(),
    }
}

/// K = 4, one context, θ = [0.55, 0.60, 0.50, 0.65].
pub fn four_arm(n: usize, runs: usize, policies: &[PolicyKind]) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::synthetic(SyntheticSpec {
        d: 0,
        k: 4,
        n,
        theta: vec![vec![0.55, 0.60, 0.50, 0.65]],
        context_freq: None,
    });
    cfg.seed = 20_190_101;
    cfg.runs = runs;
    cfg.policies = policies.to_vec();
    cfg.write_steps = false;
    cfg
}

/// Two equally likely contexts whose best arms differ.
pub fn opposite_contexts(n: usize, runs: usize, policies: &[PolicyKind]) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::synthetic(SyntheticSpec {
        d: 1,
        k: 4,
        n,
        theta: vec![vec![0.5, 0.65, 0.5, 0.5], vec![0.65, 0.5, 0.5, 0.5]],
        context_freq: Some(vec![0.5, 0.5]),
    });
    cfg.seed = 20_190_102;
    cfg.runs = runs;
    cfg.policies = policies.to_vec();
    cfg.evaluation = trialbandit::Evaluation::PerContext;
    cfg.write_steps = false;
    cfg
}

/// File name → contents for every file in `dir`.
pub fn read_dir_bytes(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect()
}
