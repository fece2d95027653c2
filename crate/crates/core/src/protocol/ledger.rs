use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::PartyId;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairRecord {
    /// Local dimension of each half of the maximally entangled pair.
    pub n: usize,
    pub with: PartyId,
}

/// Exact count of consumed entanglement and classical symbols.
///
/// Entries are only ever appended.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResourceLedger {
    pairs: Vec<PairRecord>,
    to_alice: Vec<usize>,
    from_alice: Vec<usize>,
}

impl ResourceLedger {
    pub(crate) fn record_pair(&mut self, n: usize, with: PartyId) {
        self.pairs.push(PairRecord { n, with });
    }

    pub(crate) fn record_message(&mut self, from: PartyId, arity: usize) {
        if from.is_alice() {
            self.from_alice.push(arity);
        } else {
            self.to_alice.push(arity);
        }
    }

    pub fn entangled_pairs(&self) -> &[PairRecord] {
        &self.pairs
    }

    /// Arity of every symbol sent to Alice, in order.
    pub fn to_alice_arities(&self) -> &[usize] {
        &self.to_alice
    }

    /// Arity of every symbol sent by Alice, in order.
    pub fn from_alice_arities(&self) -> &[usize] {
        &self.from_alice
    }

    pub fn classical_to_alice(&self) -> usize {
        self.to_alice.len()
    }

    pub fn classical_from_alice(&self) -> usize {
        self.from_alice.len()
    }
}

impl Serialize for ResourceLedger {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Pair {
            n: usize,
            with: usize,
        }
        let pairs: Vec<Pair> = self.pairs.iter().map(|p| Pair { n: p.n, with: p.with.into() }).collect();
        let mut st = s.serialize_struct("ResourceLedger", 3)?;
        st.serialize_field("pairs", &pairs)?;
        st.serialize_field("to_alice", &self.to_alice.len())?;
        st.serialize_field("from_alice", &self.from_alice.len())?;
        st.end()
    }
}
