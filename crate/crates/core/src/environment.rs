//! Ground-truth outcome model for replay.
//!
//! Success probabilities are estimated once per (context, arm) cell from the
//! full set of trial records and then frozen. During replay every outcome,
//! including the one for the arm the participant actually received, is a
//! fresh Bernoulli draw from the frozen cell probability.

use std::collections::BTreeMap;

use rand::Rng;

use crate::bandit::{ArmId, Outcome};
use crate::contextual::{Context, ContextIndex, MAX_CONTEXT_DIM};
use crate::error::{Error, Result};

/// One participant of a trial, in admission order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRecord {
    pub context: Context,
    pub arm: ArmId,
    pub outcome: Outcome,
    pub sequence: u64,
}

type Cell = (ContextIndex, ArmId);

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeModel {
    d: usize,
    k: usize,
    theta: BTreeMap<Cell, f64>,
    /// (successes, trials) per cell; empty for models built from a table.
    counts: BTreeMap<Cell, (u64, u64)>,
}

impl OutcomeModel {
    /// Estimates cell success probabilities from `records`.
    ///
    /// Without smoothing each cell gets its empirical success fraction, and a
    /// context that occurs in the records but never received some arm is an
    /// error. With smoothing every one of the `2^d × k` cells gets
    /// `(successes + 1) / (trials + 2)`.
    pub fn estimate(records: &[TrialRecord], k: usize, smoothing: bool) -> Result<Self> {
        let first = records
            .first()
            .ok_or_else(|| Error::invalid("cannot estimate a model from zero records"))?;
        if k == 0 {
            return Err(Error::invalid("a model needs at least one arm"));
        }
        let d = first.context.dim();
        let mut counts: BTreeMap<Cell, (u64, u64)> = BTreeMap::new();
        let mut last_sequence = None;
        for r in records {
            if r.context.dim() != d {
                return Err(Error::invalid(format!(
                    "record {} has a {}-bit context, expected {d}",
                    r.sequence,
                    r.context.dim()
                )));
            }
            if r.arm.0 >= k {
                return Err(Error::invalid(format!(
                    "record {} uses arm {} but k = {k}",
                    r.sequence, r.arm
                )));
            }
            if last_sequence.is_some_and(|s| r.sequence <= s) {
                return Err(Error::invalid(format!(
                    "record sequence numbers must increase; {} follows {}",
                    r.sequence,
                    last_sequence.unwrap_or_default()
                )));
            }
            last_sequence = Some(r.sequence);
            let cell = counts.entry((r.context.index(), r.arm)).or_default();
            cell.0 += u64::from(r.outcome.value());
            cell.1 += 1;
        }

        let mut theta = BTreeMap::new();
        if smoothing {
            for m in 0..1u32 << d {
                for u in 0..k {
                    let cell = (ContextIndex(m), ArmId(u));
                    let (s, n) = counts.get(&cell).copied().unwrap_or_default();
                    theta.insert(cell, (s as f64 + 1.0) / (n as f64 + 2.0));
                }
            }
        } else {
            let seen: Vec<ContextIndex> = {
                let mut v: Vec<_> = counts.keys().map(|(m, _)| *m).collect();
                v.dedup();
                v
            };
            for m in seen {
                for u in 0..k {
                    let cell = (m, ArmId(u));
                    match counts.get(&cell) {
                        Some(&(s, n)) => {
                            theta.insert(cell, s as f64 / n as f64);
                        }
                        None => {
                            return Err(Error::MissingCell {
                                context: m,
                                arm: ArmId(u),
                            })
                        }
                    }
                }
            }
        }
        Ok(OutcomeModel {
            d,
            k,
            theta,
            counts,
        })
    }

    /// Builds a model from an explicit table with one row of `k`
    /// probabilities per context index `0..2^d`.
    pub fn from_table(d: usize, rows: &[Vec<f64>]) -> Result<Self> {
        if d > MAX_CONTEXT_DIM {
            return Err(Error::invalid(format!(
                "context dimension {d} exceeds the maximum of {MAX_CONTEXT_DIM}"
            )));
        }
        if rows.len() != 1 << d {
            return Err(Error::invalid(format!(
                "expected {} theta rows for d = {d}, got {}",
                1u64 << d,
                rows.len()
            )));
        }
        let k = rows[0].len();
        if k == 0 {
            return Err(Error::invalid("theta rows must not be empty"));
        }
        let mut theta = BTreeMap::new();
        for (m, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::invalid(format!(
                    "theta row {m} has {} entries, expected {k}",
                    row.len()
                )));
            }
            for (u, &p) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::invalid(format!(
                        "theta[{m}][{u}] = {p} is not a probability"
                    )));
                }
                theta.insert((ContextIndex(m as u32), ArmId(u)), p);
            }
        }
        Ok(OutcomeModel {
            d,
            k,
            theta,
            counts: BTreeMap::new(),
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn theta(&self, m: ContextIndex, arm: ArmId) -> Result<f64> {
        self.theta
            .get(&(m, arm))
            .copied()
            .ok_or(Error::MissingCell { context: m, arm })
    }

    /// (successes, trials) observed for a cell during estimation.
    pub fn counts(&self, m: ContextIndex, arm: ArmId) -> Option<(u64, u64)> {
        self.counts.get(&(m, arm)).copied()
    }

    /// Context indices with at least one defined cell.
    pub fn contexts(&self) -> Vec<ContextIndex> {
        let mut v: Vec<_> = self.theta.keys().map(|(m, _)| *m).collect();
        v.dedup();
        v
    }

    fn index_of(&self, x: &Context) -> Result<ContextIndex> {
        if x.dim() != self.d {
            return Err(Error::invalid(format!(
                "context has {} bits, model expects {}",
                x.dim(),
                self.d
            )));
        }
        Ok(x.index())
    }

    /// Success with probability θ for the cell, using one uniform from `rng`.
    pub fn draw_outcome<R: Rng + ?Sized>(
        &self,
        x: &Context,
        arm: ArmId,
        rng: &mut R,
    ) -> Result<Outcome> {
        let p = self.theta(self.index_of(x)?, arm)?;
        Ok(Outcome::from_success(rng.random::<f64>() < p))
    }

    pub fn optimal_arm(&self, x: &Context) -> Result<(ArmId, f64)> {
        self.optimal_arm_at(self.index_of(x)?)
    }

    /// Best arm and its probability for context `m`; ties go to the lowest arm.
    pub fn optimal_arm_at(&self, m: ContextIndex) -> Result<(ArmId, f64)> {
        let mut best = (ArmId(0), f64::NEG_INFINITY);
        for u in 0..self.k {
            let p = self.theta(m, ArmId(u))?;
            if p > best.1 {
                best = (ArmId(u), p);
            }
        }
        Ok(best)
    }
}
