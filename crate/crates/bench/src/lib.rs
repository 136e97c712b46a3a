//! Shared fixtures for the benchmarks.

use trialbandit::{ExperimentConfig, PolicyKind, SyntheticSpec};

/// Single-context, four-arm environment at the size of the stroke trial.
pub fn ist_scale(policy: PolicyKind, n: usize) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::synthetic(SyntheticSpec {
        d: 0,
        k: 4,
        n,
        theta: vec![vec![0.55, 0.60, 0.50, 0.65]],
        context_freq: None,
    });
    cfg.runs = 1;
    cfg.workers = 1;
    cfg.policies = vec![policy];
    cfg.write_steps = false;
    cfg
}
