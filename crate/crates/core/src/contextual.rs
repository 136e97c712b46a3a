//! One independent Beta-Bernoulli bandit per binary context.
//!
//! A context is a vector of `d` bits, encoded little-endian into an index
//! `m` in `0..2^d`. Bandits are created at the uniform prior the first time
//! their context is seen, so the table only holds contexts that occurred.
//! Selection randomness comes from a single caller-owned stream consumed in
//! arrival order, which makes a `d = 0` contextual bandit step-for-step
//! identical to a plain [`BernoulliBandit`].

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::bandit::{ArmId, BernoulliBandit, Outcome};
use crate::error::{Error, Result};
use crate::policy::PolicyKind;

/// Largest supported context dimension (2^20 cells).
pub const MAX_CONTEXT_DIM: usize = 20;

/// Binary feature vector of one participant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Context(Vec<u8>);

impl Context {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.len() > MAX_CONTEXT_DIM {
            return Err(Error::invalid(format!(
                "context dimension {} exceeds the maximum of {MAX_CONTEXT_DIM}",
                bits.len()
            )));
        }
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::invalid(format!("context bits must be 0 or 1, got {b}")));
        }
        Ok(Context(bits))
    }

    /// The zero-dimensional context.
    pub fn empty() -> Self {
        Context(Vec::new())
    }

    /// Inverse of [`Context::index`] for dimension `d`.
    pub fn from_index(m: ContextIndex, d: usize) -> Result<Self> {
        if d > MAX_CONTEXT_DIM || u64::from(m.0) >= 1u64 << d {
            return Err(Error::invalid(format!("context index {m} out of range for d = {d}")));
        }
        Ok(Context((0..d).map(|j| ((m.0 >> j) & 1) as u8).collect()))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    /// `m = Σ bits[j] · 2^j`.
    pub fn index(&self) -> ContextIndex {
        ContextIndex(
            self.0
                .iter()
                .enumerate()
                .fold(0u32, |m, (j, &b)| m | (u32::from(b) << j)),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ContextIndex(pub u32);

impl fmt::Display for ContextIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContextualBandit {
    d: usize,
    k: usize,
    table: BTreeMap<ContextIndex, BernoulliBandit>,
}

impl ContextualBandit {
    pub fn new(d: usize, k: usize) -> Result<Self> {
        if d > MAX_CONTEXT_DIM {
            return Err(Error::invalid(format!(
                "context dimension {d} exceeds the maximum of {MAX_CONTEXT_DIM}"
            )));
        }
        if k == 0 {
            return Err(Error::invalid("a bandit needs at least one arm"));
        }
        Ok(ContextualBandit {
            d,
            k,
            table: BTreeMap::new(),
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Bandit for context `m`, if that context has been seen.
    pub fn get(&self, m: ContextIndex) -> Option<&BernoulliBandit> {
        self.table.get(&m)
    }

    pub fn contexts(&self) -> impl Iterator<Item = (&ContextIndex, &BernoulliBandit)> {
        self.table.iter()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    fn cell(&mut self, x: &Context) -> Result<&mut BernoulliBandit> {
        if x.dim() != self.d {
            return Err(Error::invalid(format!(
                "context has {} bits, bandit expects {}",
                x.dim(),
                self.d
            )));
        }
        let k = self.k;
        Ok(self
            .table
            .entry(x.index())
            .or_insert_with(|| BernoulliBandit::new(k).expect("k >= 1 checked in new")))
    }

    /// Selects an arm with `policy` on the bandit for context `x`.
    pub fn select<R: Rng + ?Sized>(
        &mut self,
        x: &Context,
        policy: PolicyKind,
        rng: &mut R,
    ) -> Result<ArmId> {
        let bandit = self.cell(x)?;
        Ok(policy.select(bandit, rng))
    }

    /// Applies the conjugate update inside the bandit for context `x` only.
    pub fn observe(&mut self, x: &Context, arm: ArmId, outcome: Outcome) -> Result<()> {
        if arm.0 >= self.k {
            return Err(Error::invalid(format!(
                "arm {arm} out of range for a {}-arm bandit",
                self.k
            )));
        }
        self.cell(x)?.update(arm, outcome)
    }
}
