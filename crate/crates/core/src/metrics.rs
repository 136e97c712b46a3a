//! Regret and suboptimal-draw accounting, and aggregation across runs.

use serde::{Deserialize, Serialize};

use crate::bandit::{ArmId, Outcome};
use crate::contextual::ContextIndex;
use crate::error::{Error, Result};
use crate::policy::PolicyKind;

/// How a step's regret increment is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegretMode {
    /// θ* − θ_chosen: deterministic given the chosen arm, never negative.
    #[default]
    Pseudo,
    /// θ* − C_i: uses the drawn outcome, can be negative.
    Realized,
}

/// One allocation of a replay.
#[derive(Debug, Clone, PartialEq)]
pub struct StepLog {
    /// 1-based participant index.
    pub step: u64,
    pub context: ContextIndex,
    pub arm: ArmId,
    pub outcome: Outcome,
    pub optimal_arm: ArmId,
    pub theta_opt: f64,
    pub theta_chosen: f64,
    /// Regret increment under the run's [`RegretMode`].
    pub regret: f64,
}

impl StepLog {
    pub fn suboptimal(&self) -> u8 {
        suboptimal_indicator(self.arm, self.optimal_arm)
    }
}

pub fn step_regret(theta_opt: f64, theta_chosen: f64) -> Result<f64> {
    let unit = 0.0..=1.0;
    if !unit.contains(&theta_opt) || !unit.contains(&theta_chosen) || theta_opt < theta_chosen {
        return Err(Error::invalid(format!(
            "need 0 <= theta_chosen <= theta_opt <= 1, got ({theta_opt}, {theta_chosen})"
        )));
    }
    Ok(theta_opt - theta_chosen)
}

pub fn realized_regret(theta_opt: f64, outcome: Outcome) -> f64 {
    theta_opt - f64::from(outcome.value())
}

pub fn suboptimal_indicator(chosen: ArmId, optimal: ArmId) -> u8 {
    u8::from(chosen != optimal)
}

/// Running sums of `values`.
pub fn cumulative<T>(values: impl IntoIterator<Item = T>) -> Vec<T>
where
    T: Copy + std::ops::Add<Output = T> + Default,
{
    values
        .into_iter()
        .scan(T::default(), |acc, v| {
            *acc = *acc + v;
            Some(*acc)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub policy: PolicyKind,
    pub run: usize,
    /// Seed of the run's policy stream.
    pub seed: u64,
    pub regret_curve: Vec<f64>,
    pub suboptimal_curve: Vec<u64>,
}

impl RunSummary {
    pub fn from_steps(policy: PolicyKind, run: usize, seed: u64, steps: &[StepLog]) -> Self {
        RunSummary {
            policy,
            run,
            seed,
            regret_curve: cumulative(steps.iter().map(|s| s.regret)),
            suboptimal_curve: cumulative(steps.iter().map(|s| u64::from(s.suboptimal()))),
        }
    }

    pub fn len(&self) -> usize {
        self.regret_curve.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regret_curve.is_empty()
    }

    pub fn final_regret(&self) -> f64 {
        self.regret_curve.last().copied().unwrap_or(0.0)
    }

    pub fn final_suboptimal(&self) -> u64 {
        self.suboptimal_curve.last().copied().unwrap_or(0)
    }
}

/// Percentile band, in percent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub low: f64,
    pub high: f64,
}

impl Default for Band {
    fn default() -> Self {
        Band {
            low: 25.0,
            high: 75.0,
        }
    }
}

impl Band {
    pub fn new(low: f64, high: f64) -> Result<Self> {
        if !(0.0..=100.0).contains(&low) || !(0.0..=100.0).contains(&high) || low > high {
            return Err(Error::invalid(format!(
                "percentile band must satisfy 0 <= low <= high <= 100, got ({low}, {high})"
            )));
        }
        Ok(Band { low, high })
    }
}

/// Empirical percentile of sorted data, linearly interpolating between
/// order statistics at rank `p/100 · (n − 1)`.
pub fn percentile(sorted: &[f64], p: f64) -> f64 {
    match sorted.len() {
        0 => f64::NAN,
        1 => sorted[0],
        n => {
            let rank = p / 100.0 * (n - 1) as f64;
            let lo = rank.floor() as usize;
            let hi = rank.ceil() as usize;
            sorted[lo] + (sorted[hi] - sorted[lo]) * (rank - lo as f64)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanStd {
    pub mean: f64,
    /// Sample standard deviation (n − 1 denominator); 0 for a single value.
    pub std: f64,
}

impl MeanStd {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = mean(values);
        let std = if values.len() < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        MeanStd { mean, std }
    }
}

/// Arithmetic mean, computed as an offset from the first value so that
/// identical inputs return that value exactly.
fn mean(values: &[f64]) -> f64 {
    let Some(&first) = values.first() else {
        return f64::NAN;
    };
    first + values.iter().map(|v| v - first).sum::<f64>() / values.len() as f64
}

/// Pointwise mean and percentile band of a set of curves.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedCurve {
    pub mean: Vec<f64>,
    pub low: Vec<f64>,
    pub high: Vec<f64>,
}

impl BandedCurve {
    fn of(curves: &[Vec<f64>], band: Band) -> Self {
        let len = curves[0].len();
        let mut out = BandedCurve {
            mean: Vec::with_capacity(len),
            low: Vec::with_capacity(len),
            high: Vec::with_capacity(len),
        };
        let mut column = vec![0.0; curves.len()];
        for i in 0..len {
            for (slot, c) in column.iter_mut().zip(curves) {
                *slot = c[i];
            }
            out.mean.push(mean(&column));
            column.sort_by(f64::total_cmp);
            out.low.push(percentile(&column, band.low));
            out.high.push(percentile(&column, band.high));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateSummary {
    pub policy: PolicyKind,
    pub runs: usize,
    pub band: Band,
    pub regret: BandedCurve,
    pub suboptimal: BandedCurve,
    pub final_regret: MeanStd,
    pub final_suboptimal: MeanStd,
    /// Per-run final regret as a percentage of the random policy's, when a
    /// random baseline was run.
    pub regret_ratio: Option<MeanStd>,
    pub suboptimal_ratio: Option<MeanStd>,
}

/// Mean-of-cumulative curves, percentile bands and final-value statistics
/// for runs of a single policy.
pub fn aggregate(runs: &[RunSummary], band: Band) -> Result<AggregateSummary> {
    let first = runs
        .first()
        .ok_or_else(|| Error::invalid("cannot aggregate zero runs"))?;
    if let Some(r) = runs.iter().find(|r| r.len() != first.len()) {
        return Err(Error::invalid(format!(
            "run {} has {} steps, run {} has {}",
            r.run,
            r.len(),
            first.run,
            first.len()
        )));
    }
    if let Some(r) = runs.iter().find(|r| r.policy != first.policy) {
        return Err(Error::invalid(format!(
            "cannot aggregate {} runs with {} runs",
            r.policy, first.policy
        )));
    }
    let regret: Vec<Vec<f64>> = runs.iter().map(|r| r.regret_curve.clone()).collect();
    let suboptimal: Vec<Vec<f64>> = runs
        .iter()
        .map(|r| r.suboptimal_curve.iter().map(|&s| s as f64).collect())
        .collect();
    let finals_r: Vec<f64> = runs.iter().map(RunSummary::final_regret).collect();
    let finals_s: Vec<f64> = runs.iter().map(|r| r.final_suboptimal() as f64).collect();
    Ok(AggregateSummary {
        policy: first.policy,
        runs: runs.len(),
        band,
        regret: BandedCurve::of(&regret, band),
        suboptimal: BandedCurve::of(&suboptimal, band),
        final_regret: MeanStd::of(&finals_r),
        final_suboptimal: MeanStd::of(&finals_s),
        regret_ratio: None,
        suboptimal_ratio: None,
    })
}

/// Per-run `policy / random × 100`, paired by run index.
pub fn relative_ratio(policy_finals: &[f64], random_finals: &[f64]) -> Result<MeanStd> {
    if policy_finals.len() != random_finals.len() || policy_finals.is_empty() {
        return Err(Error::invalid(format!(
            "ratio needs equal, non-zero run counts; got {} and {}",
            policy_finals.len(),
            random_finals.len()
        )));
    }
    let ratios = policy_finals
        .iter()
        .zip(random_finals)
        .enumerate()
        .map(|(run, (&p, &r))| {
            if r == 0.0 {
                Err(Error::DegenerateBaseline { run })
            } else {
                Ok(p / r * 100.0)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MeanStd::of(&ratios))
}
