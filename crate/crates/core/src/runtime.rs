//! LOCAL-model round accounting and reproducible randomness.
//!
//! Algorithms do not pass messages. Each phase declares the radius of the
//! neighborhood it reads and how often it repeats, and the ledger turns those
//! declarations into a round count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Phase {
    pub label: String,
    pub radius: u64,
    pub reps: u64,
}

impl Phase {
    pub fn rounds(&self) -> u64 {
        self.radius * self.reps
    }
}

/// Append-only list of charged phases with a running total.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundLedger {
    phases: Vec<Phase>,
    total_rounds: u64,
}

impl RoundLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a phase reading radius `radius`, repeated `reps` times.
    pub fn charge(&mut self, label: impl Into<String>, radius: u64, reps: u64) {
        assert!(reps >= 1, "a phase runs at least once");
        let phase = Phase { label: label.into(), radius, reps };
        self.total_rounds += phase.rounds();
        self.phases.push(phase);
    }

    /// Builder-style [`charge`](Self::charge).
    pub fn charge_phase(mut self, label: impl Into<String>, radius: u64, reps: u64) -> Self {
        self.charge(label, radius, reps);
        self
    }

    pub fn total_rounds(&self) -> u64 {
        self.total_rounds
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    /// Sequential composition: `other` ran after `self`.
    pub fn merge(&mut self, other: RoundLedger) {
        self.total_rounds += other.total_rounds;
        self.phases.extend(other.phases);
    }

    /// Parallel composition: parts ran side by side on disjoint regions, so the
    /// slowest part determines the cost. Ties go to the lexicographically
    /// smallest phase list, which makes the result independent of input order.
    pub fn parallel(parts: impl IntoIterator<Item = RoundLedger>) -> RoundLedger {
        parts
            .into_iter()
            .reduce(|a, b| match a.total_rounds.cmp(&b.total_rounds) {
                std::cmp::Ordering::Greater => a,
                std::cmp::Ordering::Less => b,
                std::cmp::Ordering::Equal => {
                    if a.phases <= b.phases {
                        a
                    } else {
                        b
                    }
                }
            })
            .unwrap_or_default()
    }

    /// Total rounds over phases whose label starts with `prefix`.
    pub fn rounds_with_prefix(&self, prefix: &str) -> u64 {
        self.phases.iter().filter(|p| p.label.starts_with(prefix)).map(Phase::rounds).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("ledger serializes")
    }
}

/// A counter-based random source addressed by a root seed and a path of
/// `(label, index)` pairs. Two streams with equal seed and path produce the
/// same draws no matter when or in which order they are created.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RandomStream {
    root_seed: u64,
    path: Vec<(String, u64)>,
}

impl RandomStream {
    pub fn new(root_seed: u64) -> Self {
        Self { root_seed, path: Vec::new() }
    }

    pub fn root_seed(&self) -> u64 {
        self.root_seed
    }

    pub fn path(&self) -> &[(String, u64)] {
        &self.path
    }

    pub fn derive(&self, label: &str, index: u64) -> RandomStream {
        let mut path = self.path.clone();
        path.push((label.to_owned(), index));
        RandomStream { root_seed: self.root_seed, path }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut hasher = Sha256::new();
        hasher.update(self.root_seed.to_le_bytes());
        for (label, index) in &self.path {
            hasher.update((label.len() as u64).to_le_bytes());
            hasher.update(label.as_bytes());
            hasher.update(index.to_le_bytes());
        }
        let digest = hasher.finalize();
        let mut seed = [0u8; 32];
        seed.copy_from_slice(&digest);
        ChaCha8Rng::from_seed(seed)
    }
}
