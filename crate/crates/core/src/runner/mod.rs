//! Experiment orchestration: configuration, replay and result files.

pub mod config;
pub mod experiment;
pub mod output;

pub use config::{DatasetSource, Evaluation, ExperimentConfig, SyntheticSpec};
pub use experiment::{replay, run_experiment, run_with_environment, Environment, ExperimentResults, RunOutput};
pub use output::{emit_plot_data, format_number, write_bundle, ResultsBundle};
