//! Locality-enforcing execution of remote protocols.
//!
//! A [`Session`] owns every register of a run together with the party that
//! holds it. Gates may only touch registers of a single party, parties talk
//! through an explicit classical channel, and every consumed resource is
//! recorded in a [`ResourceLedger`].

mod ledger;
mod remote;
mod session;
mod transcript;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use ledger::{PairRecord, ResourceLedger};
pub use remote::{
    finish_two_level_preparation, prepare_stator_n_level, prepare_stator_two_level, remote_cnot, remote_half_two_level,
    remote_interaction, remote_measurement, remote_multi, remote_rotation_n_level, remote_rotation_two_level,
    MeasureMode, PreparedStator, ProtocolOutcome, RemoteMeasurement,
};
pub use session::{Message, RegId, Register, Role, Session};
pub use transcript::{Event, GateKind, Transcript};

/// A party of a protocol: Alice, or one of the remote parties `B_1..B_N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "usize", from = "usize")]
pub enum PartyId {
    Alice,
    /// Remote party `i`, numbered from 1.
    Remote(usize),
}

impl PartyId {
    pub fn is_alice(self) -> bool {
        matches!(self, PartyId::Alice)
    }
}

impl fmt::Display for PartyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartyId::Alice => write!(f, "Alice"),
            PartyId::Remote(i) => write!(f, "B{i}"),
        }
    }
}

/// Wire encoding: Alice is 0, remote party `i` is `i`.
impl From<PartyId> for usize {
    fn from(p: PartyId) -> usize {
        match p {
            PartyId::Alice => 0,
            PartyId::Remote(i) => i,
        }
    }
}

impl From<usize> for PartyId {
    fn from(i: usize) -> Self {
        if i == 0 {
            PartyId::Alice
        } else {
            PartyId::Remote(i)
        }
    }
}
