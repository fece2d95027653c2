use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use super::{PartyId, RegId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateKind {
    Operation,
    /// A gate conditioned on a received classical message.
    Correction,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Event {
    Gate { party: PartyId, regs: Vec<RegId>, kind: GateKind },
    Measure { party: PartyId, reg: RegId, outcome: usize, prob: f64 },
    Message { from: PartyId, to: PartyId, symbol: usize, arity: usize },
}

/// Append-only, totally ordered record of a session.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Transcript {
    events: Vec<Event>,
}

impl Transcript {
    pub(crate) fn push(&mut self, e: Event) {
        self.events.push(e);
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn messages(&self) -> impl Iterator<Item = (PartyId, PartyId, usize, usize)> + '_ {
        self.events.iter().filter_map(|e| match *e {
            Event::Message { from, to, symbol, arity } => Some((from, to, symbol, arity)),
            _ => None,
        })
    }

    /// Every correction gate is preceded by a distinct, earlier message
    /// addressed to the correcting party.
    pub fn corrections_follow_messages(&self) -> bool {
        let mut unmatched: BTreeMap<PartyId, usize> = BTreeMap::new();
        for e in &self.events {
            match *e {
                Event::Message { to, .. } => *unmatched.entry(to).or_default() += 1,
                Event::Gate { party, kind: GateKind::Correction, .. } => match unmatched.get_mut(&party) {
                    Some(c) if *c > 0 => *c -= 1,
                    _ => return false,
                },
                _ => {}
            }
        }
        true
    }

    /// Index of the last correction gate by `party`, if any.
    pub fn last_correction(&self, party: PartyId) -> Option<usize> {
        self.events
            .iter()
            .rposition(|e| matches!(e, Event::Gate { party: p, kind: GateKind::Correction, .. } if *p == party))
    }

    /// Index of the last message from `from` to `to`, if any.
    pub fn last_message(&self, from: PartyId, to: PartyId) -> Option<usize> {
        self.events.iter().rposition(|e| matches!(e, Event::Message { from: f, to: t, .. } if *f == from && *t == to))
    }
}

impl Serialize for Event {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(rename_all = "lowercase")]
        enum Wire {
            Gate { party: usize, regs: Vec<usize> },
            Measure { party: usize, reg: usize, outcome: usize, prob: f64 },
            Msg { from: usize, to: usize, symbol: usize, arity: usize },
        }
        let wire = match self {
            Event::Gate { party, regs, .. } => {
                Wire::Gate { party: (*party).into(), regs: regs.iter().map(|r| r.0).collect() }
            }
            Event::Measure { party, reg, outcome, prob } => {
                Wire::Measure { party: (*party).into(), reg: reg.0, outcome: *outcome, prob: *prob }
            }
            Event::Message { from, to, symbol, arity } => {
                Wire::Msg { from: (*from).into(), to: (*to).into(), symbol: *symbol, arity: *arity }
            }
        };
        wire.serialize(s)
    }
}

impl Serialize for Transcript {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.events.serialize(s)
    }
}
