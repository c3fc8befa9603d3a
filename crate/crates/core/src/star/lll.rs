//! Moser-Tardos style parallel resampling.

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::runtime::{RandomStream, RoundLedger};

/// A family of bad events over resamplable random variables.
pub trait LllInstance {
    fn event_count(&self) -> usize;
    fn violated(&self, event: usize) -> bool;
    /// Variables the event depends on; events sharing one are dependent.
    fn variables(&self, event: usize) -> Vec<usize>;
    fn resample(&mut self, variable: usize, rng: &mut ChaCha8Rng);
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LllOutcome {
    pub rounds: usize,
    pub resampled_events: usize,
}

/// Each round evaluates every event, picks a maximal independent set of the
/// violated ones greedily by event id, and resamples its variables. Every
/// round is charged `radius` on the ledger.
pub fn distributed_lll<I: LllInstance>(
    instance: &mut I,
    budget_rounds: usize,
    radius: u64,
    stream: &RandomStream,
    ledger: &mut RoundLedger,
) -> Result<LllOutcome> {
    let mut outcome = LllOutcome::default();
    loop {
        let violated: Vec<usize> = (0..instance.event_count()).filter(|&e| instance.violated(e)).collect();
        ledger.charge("lll/check", radius, 1);
        if violated.is_empty() {
            return Ok(outcome);
        }
        if outcome.rounds >= budget_rounds {
            return Err(Error::LllBudget { rounds: outcome.rounds, surviving: violated });
        }
        let mut claimed = std::collections::BTreeSet::new();
        let mut chosen_vars = Vec::new();
        for event in violated {
            let vars = instance.variables(event);
            if vars.iter().all(|v| !claimed.contains(v)) {
                claimed.extend(vars.iter().copied());
                chosen_vars.extend(vars);
                outcome.resampled_events += 1;
            }
        }
        chosen_vars.sort_unstable();
        chosen_vars.dedup();
        let mut rng = stream.derive("lll-round", outcome.rounds as u64).rng();
        for var in chosen_vars {
            instance.resample(var, &mut rng);
        }
        outcome.rounds += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    /// Events "bit i is set" over independent fair bits.
    struct Bits {
        bits: Vec<bool>,
        stuck: bool,
    }

    impl LllInstance for Bits {
        fn event_count(&self) -> usize {
            self.bits.len()
        }
        fn violated(&self, event: usize) -> bool {
            self.bits[event]
        }
        fn variables(&self, event: usize) -> Vec<usize> {
            vec![event]
        }
        fn resample(&mut self, variable: usize, rng: &mut ChaCha8Rng) {
            self.bits[variable] = self.stuck || rng.random_bool(0.5);
        }
    }

    #[test]
    fn nothing_violated() {
        let mut inst = Bits { bits: vec![false; 4], stuck: false };
        let out = distributed_lll(&mut inst, 5, 1, &RandomStream::new(0), &mut RoundLedger::new()).unwrap();
        assert_eq!(out, LllOutcome::default());
    }

    #[test]
    fn resolves_and_fails_loudly() {
        let mut inst = Bits { bits: vec![true; 8], stuck: false };
        let out = distributed_lll(&mut inst, 64, 1, &RandomStream::new(1), &mut RoundLedger::new()).unwrap();
        assert!(out.rounds >= 1);
        assert!(inst.bits.iter().all(|b| !b));
        let mut hard = Bits { bits: vec![true; 3], stuck: true };
        let err = distributed_lll(&mut hard, 4, 1, &RandomStream::new(1), &mut RoundLedger::new()).unwrap_err();
        assert_eq!(err, Error::LllBudget { rounds: 4, surviving: vec![0, 1, 2] });
    }
}
