//! Arm-selection rules over a [`BernoulliBandit`].

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bandit::{ArmId, BernoulliBandit};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    Random,
    Greedy,
    Thompson,
    Ucb,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 4] = [
        PolicyKind::Random,
        PolicyKind::Greedy,
        PolicyKind::Thompson,
        PolicyKind::Ucb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Random => "random",
            PolicyKind::Greedy => "greedy",
            PolicyKind::Thompson => "thompson",
            PolicyKind::Ucb => "ucb",
        }
    }

    /// Stable key for stream derivation. Never renumber.
    pub fn stream_id(self) -> u64 {
        match self {
            PolicyKind::Random => 1,
            PolicyKind::Greedy => 2,
            PolicyKind::Thompson => 3,
            PolicyKind::Ucb => 4,
        }
    }

    /// Picks an arm of `bandit` according to this rule.
    pub fn select<R: Rng + ?Sized>(self, bandit: &BernoulliBandit, rng: &mut R) -> ArmId {
        match self {
            PolicyKind::Random => select_random_arm(bandit.k(), rng),
            PolicyKind::Greedy => select_greedy(bandit, rng),
            PolicyKind::Thompson => select_thompson(bandit, rng),
            PolicyKind::Ucb => select_ucb(bandit),
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "random" => Ok(PolicyKind::Random),
            "greedy" => Ok(PolicyKind::Greedy),
            "thompson" => Ok(PolicyKind::Thompson),
            "ucb" => Ok(PolicyKind::Ucb),
            other => Err(Error::invalid(format!("unknown policy `{other}`"))),
        }
    }
}

/// Uniform choice over `0..k`.
pub fn select_random<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Result<ArmId> {
    if k == 0 {
        return Err(Error::invalid("cannot select from zero arms"));
    }
    Ok(select_random_arm(k, rng))
}

fn select_random_arm<R: Rng + ?Sized>(k: usize, rng: &mut R) -> ArmId {
    ArmId(rng.random_range(0..k))
}

/// Arm with the largest posterior mean; ties broken uniformly at random.
pub fn select_greedy<R: Rng + ?Sized>(bandit: &BernoulliBandit, rng: &mut R) -> ArmId {
    argmax_random_tie(bandit.means(), rng)
}

/// Draws one θ̂ per arm, in arm order, and returns the largest.
pub fn select_thompson<R: Rng + ?Sized>(bandit: &BernoulliBandit, rng: &mut R) -> ArmId {
    let draws: Vec<f64> = bandit.arms().iter().map(|p| p.sample(rng)).collect();
    argmax_random_tie(draws, rng)
}

/// Optimistic index `mean + sqrt(ln i / pulls)` for the `i`-th (1-based)
/// allocation. Unpulled arms are infinitely optimistic.
pub fn ucb_index(mean: f64, pulls: u64, i: u64) -> f64 {
    if pulls == 0 {
        return f64::INFINITY;
    }
    mean + ((i as f64).ln() / pulls as f64).sqrt()
}

/// Round-robin over the first K allocations, then the arm with the largest
/// [`ucb_index`]. Ties go to the lowest index, so the choice is a pure
/// function of the bandit state.
pub fn select_ucb(bandit: &BernoulliBandit) -> ArmId {
    let k = bandit.k() as u64;
    if bandit.t() < k {
        return ArmId(bandit.t() as usize);
    }
    let i = bandit.t() + 1;
    let indices = bandit
        .means()
        .zip(bandit.pulls())
        .map(|(mean, &n)| ucb_index(mean, n, i));
    argmax_lowest(indices)
}

fn argmax_lowest(values: impl IntoIterator<Item = f64>) -> ArmId {
    let mut best = 0;
    let mut best_value = f64::NEG_INFINITY;
    for (u, v) in values.into_iter().enumerate() {
        if v > best_value {
            best = u;
            best_value = v;
        }
    }
    ArmId(best)
}

fn argmax_random_tie<R: Rng + ?Sized>(values: impl IntoIterator<Item = f64>, rng: &mut R) -> ArmId {
    let values: Vec<f64> = values.into_iter().collect();
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tied: Vec<usize> = (0..values.len()).filter(|&u| values[u] == max).collect();
    match tied.len() {
        0 => ArmId(0),
        1 => ArmId(tied[0]),
        n => ArmId(tied[rng.random_range(0..n)]),
    }
}
