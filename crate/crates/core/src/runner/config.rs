//! Experiment configuration, read from a TOML document.
//!
//! ```toml
//! seed = 42
//! runs = 20
//! policies = ["random", "thompson", "ucb"]
//! contextual = true
//! band = { low = 25.0, high = 75.0 }
//! regret_mode = "pseudo"        # or "realized"
//! evaluation = "auto"           # or "per_context", "pooled"
//! smoothing = false
//! out = "results"
//! workers = 0                   # 0 = one per core
//! write_steps = true
//!
//! [synthetic]
//! d = 1
//! k = 4
//! n = 19435
//! theta = [[0.5, 0.65, 0.5, 0.5], [0.65, 0.5, 0.5, 0.5]]
//! context_freq = [0.5, 0.5]
//! ```
//!
//! A `[dataset]` table (with `path`, `missing` and a `[dataset.mapping]`
//! sub-table) replaces `[synthetic]` for replay of a recorded trial.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::contextual::MAX_CONTEXT_DIM;
use crate::error::{Error, Result};
use crate::ingest::{ColumnMapping, MissingPolicy};
use crate::metrics::{Band, RegretMode};
use crate::policy::PolicyKind;

/// Which ground truth defines the optimal arm when scoring a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evaluation {
    /// Per-context for contextual runs, pooled for context-free runs.
    #[default]
    Auto,
    PerContext,
    /// A single context-independent table (context-weighted average of the
    /// cells, or the estimate from the records with contexts ignored).
    Pooled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSource {
    pub path: PathBuf,
    #[serde(default)]
    pub missing: MissingPolicy,
    pub mapping: ColumnMapping,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub d: usize,
    pub k: usize,
    /// Number of participants.
    pub n: usize,
    /// One row of `k` success probabilities per context index `0..2^d`.
    pub theta: Vec<Vec<f64>>,
    /// Probability of each context index; uniform when omitted.
    #[serde(default)]
    pub context_freq: Option<Vec<f64>>,
}

impl SyntheticSpec {
    pub fn frequencies(&self) -> Vec<f64> {
        match &self.context_freq {
            Some(f) => f.clone(),
            None => vec![1.0 / (1u64 << self.d) as f64; 1 << self.d],
        }
    }

    fn validate(&self) -> Result<()> {
        if self.d > MAX_CONTEXT_DIM {
            return Err(Error::Config(format!(
                "synthetic.d = {} exceeds the maximum of {MAX_CONTEXT_DIM}",
                self.d
            )));
        }
        if self.k == 0 || self.n == 0 {
            return Err(Error::Config("synthetic.k and synthetic.n must be positive".into()));
        }
        let cells = 1usize << self.d;
        if self.theta.len() != cells || self.theta.iter().any(|row| row.len() != self.k) {
            return Err(Error::Config(format!(
                "synthetic.theta must have {cells} rows of {} probabilities",
                self.k
            )));
        }
        let freq = self.frequencies();
        if freq.len() != cells || freq.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::Config(format!(
                "synthetic.context_freq must hold {cells} probabilities"
            )));
        }
        let total: f64 = freq.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "synthetic.context_freq sums to {total}, not 1"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default = "default_policies")]
    pub policies: Vec<PolicyKind>,
    #[serde(default)]
    pub contextual: bool,
    #[serde(default)]
    pub band: Band,
    #[serde(default)]
    pub regret_mode: RegretMode,
    #[serde(default)]
    pub evaluation: Evaluation,
    #[serde(default)]
    pub smoothing: bool,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default)]
    pub workers: usize,
    #[serde(default = "default_true")]
    pub write_steps: bool,
    #[serde(default)]
    pub dataset: Option<DatasetSource>,
    #[serde(default)]
    pub synthetic: Option<SyntheticSpec>,
}

fn default_runs() -> usize {
    20
}

fn default_policies() -> Vec<PolicyKind> {
    vec![PolicyKind::Random, PolicyKind::Thompson, PolicyKind::Ucb]
}

fn default_out() -> PathBuf {
    PathBuf::from("results")
}

fn default_true() -> bool {
    true
}

impl ExperimentConfig {
    /// A synthetic experiment with default settings.
    pub fn synthetic(spec: SyntheticSpec) -> Self {
        ExperimentConfig {
            seed: 0,
            runs: default_runs(),
            policies: default_policies(),
            contextual: false,
            band: Band::default(),
            regret_mode: RegretMode::default(),
            evaluation: Evaluation::default(),
            smoothing: false,
            out: default_out(),
            workers: 0,
            write_steps: true,
            dataset: None,
            synthetic: Some(spec),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Parses a config file. A relative dataset path is taken relative to
    /// the file's directory.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml(&text)?;
        if let (Some(ds), Some(dir)) = (cfg.dataset.as_mut(), path.parent()) {
            if ds.path.is_relative() {
                ds.path = dir.join(&ds.path);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        if self.policies.is_empty() {
            return Err(Error::Config("at least one policy is required".into()));
        }
        Band::new(self.band.low, self.band.high).map_err(|e| Error::Config(e.to_string()))?;
        match (&self.dataset, &self.synthetic) {
            (Some(ds), None) => ds.mapping.validate(),
            (None, Some(spec)) => spec.validate(),
            _ => Err(Error::Config(
                "exactly one of [dataset] or [synthetic] must be present".into(),
            )),
        }
    }

    /// Policies in canonical order with duplicates removed.
    pub fn policy_set(&self) -> Vec<PolicyKind> {
        let mut p = self.policies.clone();
        p.sort();
        p.dedup();
        p
    }

    pub fn evaluates_per_context(&self) -> bool {
        match self.evaluation {
            Evaluation::Auto => self.contextual,
            Evaluation::PerContext => true,
            Evaluation::Pooled => false,
        }
    }
}
