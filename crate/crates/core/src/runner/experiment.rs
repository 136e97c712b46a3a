//! The replay loop.
//!
//! For every (policy, run) pair the participants are processed in order:
//! observe the context, select an arm, draw the outcome from the frozen
//! ground-truth model, update the bandit and log the step. Each pair gets
//! three streams derived from the master seed:
//!
//! * environment (run-keyed): one uniform per participant for the outcome,
//! * context (run-keyed): one uniform per participant in synthetic mode,
//! * policy (run- and policy-keyed): whatever the selector consumes.
//!
//! The first two are shared by all policies of a run, so policies are
//! compared on common random numbers, and adding or removing a policy
//! never changes another policy's results.

use rand::Rng;
use rayon::prelude::*;

use crate::bandit::{ArmId, BernoulliBandit, Outcome};
use crate::contextual::{Context, ContextIndex, ContextualBandit};
use crate::environment::{OutcomeModel, TrialRecord};
use crate::error::{Error, Result};
use crate::ingest::{load_csv, Dataset};
use crate::metrics::{aggregate, realized_regret, relative_ratio, step_regret, AggregateSummary, MeanStd, RegretMode, RunSummary, StepLog};
use crate::policy::PolicyKind;
use crate::rng::{derive_seed, seeded, stream, RandomStream, StreamKind};

use super::config::ExperimentConfig;

enum Participants {
    Recorded(Vec<Context>),
    Synthetic { n: usize, d: usize, cdf: Vec<f64> },
}

impl Participants {
    fn len(&self) -> usize {
        match self {
            Participants::Recorded(c) => c.len(),
            Participants::Synthetic { n, .. } => *n,
        }
    }

    fn context(&self, i: usize, rng: &mut RandomStream) -> Context {
        match self {
            Participants::Recorded(c) => c[i].clone(),
            Participants::Synthetic { d, cdf, .. } => {
                let u: f64 = rng.random();
                let m = cdf.iter().position(|&c| u < c).unwrap_or(cdf.len() - 1);
                Context::from_index(ContextIndex(m as u32), *d).expect("index below 2^d")
            }
        }
    }
}

/// Everything a replay needs that does not depend on the policy or run.
pub struct Environment {
    participants: Participants,
    /// Draws outcomes.
    generator: OutcomeModel,
    /// Scores choices. Either the generator itself or its pooled version.
    evaluator: OutcomeModel,
    excluded: usize,
}

impl Environment {
    pub fn prepare(config: &ExperimentConfig) -> Result<Self> {
        config.validate()?;
        if let Some(spec) = &config.synthetic {
            let generator = OutcomeModel::from_table(spec.d, &spec.theta)?;
            let freq = spec.frequencies();
            let evaluator = if config.evaluates_per_context() {
                generator.clone()
            } else {
                let pooled: Vec<f64> = (0..spec.k)
                    .map(|u| spec.theta.iter().zip(&freq).map(|(row, f)| row[u] * f).sum())
                    .collect();
                OutcomeModel::from_table(0, &[pooled])?
            };
            let mut cdf: Vec<f64> = freq
                .iter()
                .scan(0.0, |acc, f| {
                    *acc += f;
                    Some(*acc)
                })
                .collect();
            if let Some(last) = cdf.last_mut() {
                *last = f64::INFINITY;
            }
            return Ok(Environment {
                participants: Participants::Synthetic {
                    n: spec.n,
                    d: spec.d,
                    cdf,
                },
                generator,
                evaluator,
                excluded: 0,
            });
        }
        let source = config.dataset.as_ref().expect("validated: one source present");
        let dataset = load_csv(&source.path, &source.mapping, source.missing)?;
        Self::from_dataset(&dataset, config)
    }

    pub fn from_dataset(dataset: &Dataset, config: &ExperimentConfig) -> Result<Self> {
        let generator = OutcomeModel::estimate(&dataset.records, dataset.k, config.smoothing)?;
        let evaluator = if config.evaluates_per_context() {
            generator.clone()
        } else {
            let pooled: Vec<TrialRecord> = dataset
                .records
                .iter()
                .map(|r| TrialRecord {
                    context: Context::empty(),
                    ..r.clone()
                })
                .collect();
            OutcomeModel::estimate(&pooled, dataset.k, config.smoothing)?
        };
        Ok(Environment {
            participants: Participants::Recorded(
                dataset.records.iter().map(|r| r.context.clone()).collect(),
            ),
            generator,
            evaluator,
            excluded: dataset.excluded,
        })
    }

    pub fn horizon(&self) -> usize {
        self.participants.len()
    }

    pub fn d(&self) -> usize {
        self.generator.d()
    }

    pub fn k(&self) -> usize {
        self.generator.k()
    }

    pub fn generator(&self) -> &OutcomeModel {
        &self.generator
    }

    pub fn evaluator(&self) -> &OutcomeModel {
        &self.evaluator
    }

    /// Rows dropped while loading the dataset.
    pub fn excluded(&self) -> usize {
        self.excluded
    }

    fn score(&self, x: &Context) -> Result<(ContextIndex, ArmId, f64)> {
        let m = if self.evaluator.d() == 0 {
            ContextIndex(0)
        } else {
            x.index()
        };
        let (arm, theta) = self.evaluator.optimal_arm_at(m)?;
        Ok((m, arm, theta))
    }
}

enum Learner {
    ContextFree(BernoulliBandit),
    Contextual(ContextualBandit),
}

impl Learner {
    fn select(&mut self, x: &Context, policy: PolicyKind, rng: &mut RandomStream) -> Result<ArmId> {
        match self {
            Learner::ContextFree(b) => Ok(policy.select(b, rng)),
            Learner::Contextual(cb) => cb.select(x, policy, rng),
        }
    }

    fn observe(&mut self, x: &Context, arm: ArmId, outcome: Outcome) -> Result<()> {
        match self {
            Learner::ContextFree(b) => b.update(arm, outcome),
            Learner::Contextual(cb) => cb.observe(x, arm, outcome),
        }
    }
}

/// Output of one (policy, run) replay.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub summary: RunSummary,
    /// Present when the config asks for step logs.
    pub steps: Option<Vec<StepLog>>,
}

/// Replays every participant once for `policy` in run `run`.
pub fn replay(
    env: &Environment,
    config: &ExperimentConfig,
    policy: PolicyKind,
    run: usize,
) -> Result<RunOutput> {
    let mut env_rng = stream(config.seed, run as u64, StreamKind::Environment);
    let mut ctx_rng = stream(config.seed, run as u64, StreamKind::Context);
    let policy_seed = derive_seed(config.seed, run as u64, StreamKind::Policy(policy.stream_id()));
    let mut policy_rng = seeded(policy_seed);

    let mut learner = if config.contextual {
        Learner::Contextual(ContextualBandit::new(env.d(), env.k())?)
    } else {
        Learner::ContextFree(BernoulliBandit::new(env.k())?)
    };

    let n = env.horizon();
    let mut steps = Vec::with_capacity(n);
    for i in 0..n {
        let x = env.participants.context(i, &mut ctx_rng);
        let arm = learner.select(&x, policy, &mut policy_rng)?;
        let outcome = env.generator.draw_outcome(&x, arm, &mut env_rng)?;
        learner.observe(&x, arm, outcome)?;

        let (m, optimal_arm, theta_opt) = env.score(&x)?;
        let theta_chosen = env.evaluator.theta(m, arm)?;
        let regret = match config.regret_mode {
            RegretMode::Pseudo => step_regret(theta_opt, theta_chosen)?,
            RegretMode::Realized => realized_regret(theta_opt, outcome),
        };
        steps.push(StepLog {
            step: i as u64 + 1,
            context: x.index(),
            arm,
            outcome,
            optimal_arm,
            theta_opt,
            theta_chosen,
            regret,
        });
    }
    let summary = RunSummary::from_steps(policy, run, policy_seed, &steps);
    Ok(RunOutput {
        summary,
        steps: config.write_steps.then_some(steps),
    })
}

/// All runs plus per-policy aggregates, ordered by (policy, run).
#[derive(Debug, Clone)]
pub struct ExperimentResults {
    pub config: ExperimentConfig,
    pub horizon: usize,
    pub excluded: usize,
    pub runs: Vec<RunOutput>,
    pub aggregates: Vec<AggregateSummary>,
}

impl ExperimentResults {
    pub fn runs_of(&self, policy: PolicyKind) -> impl Iterator<Item = &RunOutput> {
        self.runs.iter().filter(move |r| r.summary.policy == policy)
    }

    pub fn aggregate_of(&self, policy: PolicyKind) -> Option<&AggregateSummary> {
        self.aggregates.iter().find(|a| a.policy == policy)
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResults> {
    let env = Environment::prepare(config)?;
    run_with_environment(&env, config)
}

pub fn run_with_environment(env: &Environment, config: &ExperimentConfig) -> Result<ExperimentResults> {
    config.validate()?;
    let policies = config.policy_set();
    let jobs: Vec<(PolicyKind, usize)> = policies
        .iter()
        .flat_map(|&p| (0..config.runs).map(move |r| (p, r)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let runs: Vec<RunOutput> = pool.install(|| {
        jobs.par_iter()
            .map(|&(p, r)| replay(env, config, p, r))
            .collect::<Result<_>>()
    })?;

    let mut aggregates = Vec::with_capacity(policies.len());
    for &p in &policies {
        let summaries: Vec<RunSummary> = runs
            .iter()
            .filter(|r| r.summary.policy == p)
            .map(|r| r.summary.clone())
            .collect();
        aggregates.push(aggregate(&summaries, config.band)?);
    }
    if let Some(random) = aggregates.iter().position(|a| a.policy == PolicyKind::Random) {
        let finals = |p: PolicyKind| -> (Vec<f64>, Vec<f64>) {
            runs.iter()
                .filter(|r| r.summary.policy == p)
                .map(|r| (r.summary.final_regret(), r.summary.final_suboptimal() as f64))
                .unzip()
        };
        let (base_r, base_s) = finals(aggregates[random].policy);
        for agg in &mut aggregates {
            let (r, s) = finals(agg.policy);
            agg.regret_ratio = ratio_or_none(&r, &base_r)?;
            agg.suboptimal_ratio = ratio_or_none(&s, &base_s)?;
        }
    }

    Ok(ExperimentResults {
        config: config.clone(),
        horizon: env.horizon(),
        excluded: env.excluded(),
        runs,
        aggregates,
    })
}

/// A zero baseline leaves the ratio undefined rather than failing the run.
fn ratio_or_none(policy: &[f64], random: &[f64]) -> Result<Option<MeanStd>> {
    match relative_ratio(policy, random) {
        Ok(r) => Ok(Some(r)),
        Err(Error::DegenerateBaseline { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}
