use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::linalg::StateVector;
use crate::protocol::PartyId;
use crate::scalar::Real;
use crate::scenario::Scenario;

/// Symbol counts on one directed classical channel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChannelCounts {
    pub from: PartyId,
    pub to: PartyId,
    pub arity: usize,
    pub counts: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatchReport {
    pub trials: u64,
    pub channels: Vec<ChannelCounts>,
    pub min_fidelity: f64,
    /// Counts of measured eigenvalues `[+1, -1]` (measure scenarios).
    pub outcomes: [u64; 2],
    /// Counts of realized coupling signs `[+1, -1]` (instantaneous measurement).
    pub coupling_signs: [u64; 2],
}

#[derive(Default)]
struct Partial {
    channels: BTreeMap<(PartyId, PartyId, usize), Vec<u64>>,
    min_fidelity: Option<f64>,
    outcomes: [u64; 2],
    signs: [u64; 2],
}

fn sign_slot(s: i8) -> usize {
    usize::from(s < 0)
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        for (k, v) in other.channels {
            let slot = self.channels.entry(k).or_insert_with(|| vec![0; v.len()]);
            for (a, b) in slot.iter_mut().zip(v) {
                *a += b;
            }
        }
        self.min_fidelity = match (self.min_fidelity, other.min_fidelity) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        for i in 0..2 {
            self.outcomes[i] += other.outcomes[i];
            self.signs[i] += other.signs[i];
        }
        self
    }
}

/// Runs `trials` independent sampled runs of `scenario` on `input`.
///
/// Trial `t` uses stream `t` of the generator seeded with `seed`, so the
/// result does not depend on scheduling; counts are summed per channel.
pub fn run_batch<T: Real>(
    scenario: &Scenario<T>,
    input: &StateVector<T>,
    trials: u64,
    seed: u64,
) -> Result<BatchReport> {
    let total = (0..trials)
        .into_par_iter()
        .map(|t| {
            let run = scenario.run(input, seed, t, &[])?;
            let mut p = Partial { min_fidelity: Some(run.fidelity.as_f64()), ..Partial::default() };
            for (from, to, symbol, arity) in run.transcript.messages() {
                p.channels.entry((from, to, arity)).or_insert_with(|| vec![0; arity])[symbol] += 1;
            }
            if let Some(o) = run.outcome {
                p.outcomes[sign_slot(o)] += 1;
            }
            if let Some(s) = run.coupling_sign {
                p.signs[sign_slot(s)] += 1;
            }
            Ok(p)
        })
        .try_reduce(Partial::default, |a, b| Ok(a.merge(b)))?;
    Ok(BatchReport {
        trials,
        channels: total
            .channels
            .into_iter()
            .map(|((from, to, arity), counts)| ChannelCounts { from, to, arity, counts })
            .collect(),
        min_fidelity: total.min_fidelity.unwrap_or(f64::NAN),
        outcomes: total.outcomes,
        coupling_signs: total.signs,
    })
}
