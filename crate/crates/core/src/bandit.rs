//! Beta-Bernoulli bandit state.
//!
//! Each arm carries a Beta(α, β) posterior over its success probability,
//! starting from the uniform prior (1, 1). A Bernoulli observation `c` on an
//! arm moves its parameters to (α + c, β + 1 − c); all other arms are left
//! alone.
//!
//! Posterior draws use Cheng's (1978) rejection samplers (algorithm BB when
//! both parameters exceed 1, BC otherwise) as implemented by `rand_distr`
//! 0.5.1, which the workspace pins exactly so that a given stream state
//! always produces the same draw.

use std::fmt;

use rand::Rng;
use rand_distr::{Beta, Distribution};

use crate::error::{Error, Result};

/// Zero-based arm index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArmId(pub usize);

impl ArmId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ArmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Binary clinical outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Failure,
    Success,
}

impl Outcome {
    pub fn from_bit(bit: u8) -> Result<Self> {
        match bit {
            0 => Ok(Outcome::Failure),
            1 => Ok(Outcome::Success),
            other => Err(Error::invalid(format!("outcome must be 0 or 1, got {other}"))),
        }
    }

    pub fn from_success(success: bool) -> Self {
        if success {
            Outcome::Success
        } else {
            Outcome::Failure
        }
    }

    pub fn value(self) -> u8 {
        match self {
            Outcome::Failure => 0,
            Outcome::Success => 1,
        }
    }

    pub fn is_success(self) -> bool {
        self == Outcome::Success
    }
}

/// Beta posterior over one arm's success probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParams {
    alpha: f64,
    beta: f64,
}

impl Default for BetaParams {
    fn default() -> Self {
        Self::uniform()
    }
}

impl BetaParams {
    /// The (1, 1) prior.
    pub const fn uniform() -> Self {
        BetaParams {
            alpha: 1.0,
            beta: 1.0,
        }
    }

    /// Both parameters must be finite and at least 1.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && alpha >= 1.0 && beta >= 1.0) {
            return Err(Error::invalid(format!(
                "beta parameters must be finite and >= 1, got ({alpha}, {beta})"
            )));
        }
        Ok(BetaParams { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn observe(&mut self, outcome: Outcome) {
        match outcome {
            Outcome::Success => self.alpha += 1.0,
            Outcome::Failure => self.beta += 1.0,
        }
    }

    /// α / (α + β).
    pub fn mean(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }

    /// One draw from Beta(α, β).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        // new() guarantees both parameters are finite and positive.
        Beta::new(self.alpha, self.beta)
            .expect("validated beta parameters")
            .sample(rng)
    }
}

/// K independent Beta-Bernoulli arms with pull counts and a local clock.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliBandit {
    arms: Vec<BetaParams>,
    pulls: Vec<u64>,
    t: u64,
}

impl BernoulliBandit {
    /// A bandit with `k` arms, all at the (1, 1) prior.
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("a bandit needs at least one arm"));
        }
        Ok(BernoulliBandit {
            arms: vec![BetaParams::uniform(); k],
            pulls: vec![0; k],
            t: 0,
        })
    }

    /// Rebuilds a bandit from explicit arm state.
    ///
    /// Each arm must satisfy `alpha + beta == 2 + pulls` (to within 1e-9).
    pub fn from_parts(arms: Vec<BetaParams>, pulls: Vec<u64>) -> Result<Self> {
        if arms.is_empty() {
            return Err(Error::invalid("a bandit needs at least one arm"));
        }
        if arms.len() != pulls.len() {
            return Err(Error::invalid(format!(
                "{} arms but {} pull counts",
                arms.len(),
                pulls.len()
            )));
        }
        for (u, (p, &n)) in arms.iter().zip(&pulls).enumerate() {
            if (p.alpha + p.beta - 2.0 - n as f64).abs() > 1e-9 {
                return Err(Error::invalid(format!(
                    "arm {u}: alpha + beta = {} but pulls = {n}",
                    p.alpha + p.beta
                )));
            }
        }
        let t = pulls.iter().sum();
        Ok(BernoulliBandit { arms, pulls, t })
    }

    pub fn k(&self) -> usize {
        self.arms.len()
    }

    /// Number of updates applied so far.
    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn arms(&self) -> &[BetaParams] {
        &self.arms
    }

    pub fn pulls(&self) -> &[u64] {
        &self.pulls
    }

    pub fn arm(&self, arm: ArmId) -> Result<&BetaParams> {
        self.check(arm)?;
        Ok(&self.arms[arm.0])
    }

    pub fn check(&self, arm: ArmId) -> Result<()> {
        if arm.0 >= self.k() {
            return Err(Error::invalid(format!(
                "arm {arm} out of range for a {}-arm bandit",
                self.k()
            )));
        }
        Ok(())
    }

    /// Applies the conjugate update for `outcome` on `arm`.
    pub fn update(&mut self, arm: ArmId, outcome: Outcome) -> Result<()> {
        self.check(arm)?;
        self.arms[arm.0].observe(outcome);
        self.pulls[arm.0] += 1;
        self.t += 1;
        Ok(())
    }

    pub fn means(&self) -> impl Iterator<Item = f64> + '_ {
        self.arms.iter().map(BetaParams::mean)
    }
}
