//! Seeded random streams.
//!
//! Every stochastic component draws from its own [`RandomStream`], a
//! ChaCha8 generator whose seed is derived from the experiment's master seed
//! and a key naming the stream's purpose. Keys are mixed with SplitMix64, so
//! a stream's contents depend only on its key and never on how many other
//! streams exist or the order they were created in.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used for every stream in the crate.
pub type RandomStream = ChaCha8Rng;

/// What a derived stream is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamKind {
    /// Bernoulli outcome draws. Shared by every policy within a run.
    Environment,
    /// Participant contexts in synthetic mode. Shared by every policy within a run.
    Context,
    /// Arm-selection randomness, keyed by policy.
    Policy(u64),
}

impl StreamKind {
    fn tag(self) -> [u64; 2] {
        match self {
            StreamKind::Environment => [0x656e_7669, 0],
            StreamKind::Context => [0x6374_7874, 0],
            StreamKind::Policy(id) => [0x706f_6c69, id],
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives the 64-bit seed for `(master, run, kind)`.
pub fn derive_seed(master: u64, run: u64, kind: StreamKind) -> u64 {
    let [tag, id] = kind.tag();
    [run, tag, id]
        .into_iter()
        .fold(splitmix64(master), |acc, word| splitmix64(acc ^ splitmix64(word)))
}

pub fn stream(master: u64, run: u64, kind: StreamKind) -> RandomStream {
    RandomStream::seed_from_u64(derive_seed(master, run, kind))
}

pub fn seeded(seed: u64) -> RandomStream {
    RandomStream::seed_from_u64(seed)
}
