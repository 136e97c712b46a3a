//! Beta-Bernoulli multi-armed bandits and a replay simulator for adaptive
//! treatment allocation.
//!
//! The library layers are:
//!
//! * [`bandit`]: per-arm Beta posteriors and their conjugate update,
//! * [`policy`]: Random, Greedy, Thompson sampling and UCB selection,
//! * [`contextual`]: one independent bandit per binary context,
//! * [`environment`]: ground-truth success probabilities and outcome draws,
//! * [`ingest`]: trial records from CSV,
//! * [`metrics`]: regret, suboptimal draws and multi-run aggregation,
//! * [`runner`]: configured experiments and their result files.

pub mod bandit;
pub mod contextual;
pub mod environment;
pub mod error;
pub mod ingest;
pub mod metrics;
pub mod policy;
pub mod rng;
pub mod runner;

pub use bandit::{ArmId, BernoulliBandit, BetaParams, Outcome};
pub use contextual::{Context, ContextIndex, ContextualBandit, MAX_CONTEXT_DIM};
pub use environment::{OutcomeModel, TrialRecord};
pub use error::{Error, Result};
pub use ingest::{encode_arm, encode_context, encode_outcome, load_csv, read_csv, ColumnMapping, Dataset, MissingPolicy};
pub use metrics::{
    aggregate, relative_ratio, step_regret, suboptimal_indicator, AggregateSummary, Band, MeanStd, RegretMode,
    RunSummary, StepLog,
};
pub use policy::{select_greedy, select_random, select_thompson, select_ucb, PolicyKind};
pub use rng::RandomStream;
pub use runner::{run_experiment, write_bundle, Evaluation, ExperimentConfig, ExperimentResults, SyntheticSpec};
