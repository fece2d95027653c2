use std::collections::{BTreeMap, VecDeque};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ledger::ResourceLedger;
use super::transcript::{Event, GateKind, Transcript};
use super::PartyId;
use crate::error::{Error, Result};
use crate::linalg::{measure_projective, Operator, OutcomeSource, StateVector};
use crate::scalar::{czero, Real};

/// Stable register handle; positions in the state vector shift as
/// registers are measured out, ids never do.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct RegId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    System,
    /// Alice's half of a shared pair.
    AncillaA,
    /// The remote party's half of a shared pair.
    AncillaB,
    Pointer,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Register {
    pub id: RegId,
    pub dim: usize,
    pub owner: PartyId,
    pub role: Role,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Message {
    pub from: PartyId,
    pub symbol: usize,
    pub arity: usize,
}

#[derive(Clone, Debug)]
struct Pair {
    a: RegId,
    b: RegId,
    n: usize,
    remote: PartyId,
    used: bool,
}

/// State of one protocol run.
#[derive(Clone, Debug)]
pub struct Session<T> {
    registers: Vec<Register>,
    state: StateVector<T>,
    transcript: Transcript,
    ledger: ResourceLedger,
    rng: ChaCha8Rng,
    forced: VecDeque<usize>,
    branches: Vec<(usize, T)>,
    pairs: Vec<Pair>,
    inbox: BTreeMap<PartyId, VecDeque<Message>>,
    received: BTreeMap<PartyId, usize>,
    remotes: usize,
    next_id: usize,
}

impl<T: Real> Session<T> {
    /// Session over system registers `system_dims` held by `owners`.
    ///
    /// The number of remote parties is fixed to the largest remote index
    /// among the owners.
    pub fn new(system_dims: &[usize], owners: &[PartyId], initial: StateVector<T>, seed: u64) -> Result<Self> {
        if system_dims.len() != owners.len() {
            return Err(Error::DimMismatch(format!("{} registers but {} owners", system_dims.len(), owners.len())));
        }
        if initial.dims() != system_dims {
            return Err(Error::DimMismatch(format!("state dims {:?} vs system dims {system_dims:?}", initial.dims())));
        }
        if owners.contains(&PartyId::Remote(0)) {
            return Err(Error::UnknownParty(PartyId::Remote(0)));
        }
        let remotes = owners
            .iter()
            .filter_map(|p| match p {
                PartyId::Remote(i) => Some(*i),
                PartyId::Alice => None,
            })
            .max()
            .unwrap_or(0);
        let registers = system_dims
            .iter()
            .zip(owners)
            .enumerate()
            .map(|(i, (&dim, &owner))| Register { id: RegId(i), dim, owner, role: Role::System })
            .collect();
        Ok(Self {
            registers,
            state: initial,
            transcript: Transcript::default(),
            ledger: ResourceLedger::default(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            forced: VecDeque::new(),
            branches: Vec::new(),
            pairs: Vec::new(),
            inbox: BTreeMap::new(),
            received: BTreeMap::new(),
            remotes,
            next_id: system_dims.len(),
        })
    }

    /// Selects an independent random stream (e.g. the trial index of a batch).
    pub fn with_stream(mut self, stream: u64) -> Self {
        self.rng.set_stream(stream);
        self
    }

    /// Queues outcomes to be used, in order, by the next measurements instead
    /// of sampling. The true Born probability is still recorded.
    pub fn force_outcomes(&mut self, outcomes: impl IntoIterator<Item = usize>) {
        self.forced.extend(outcomes);
    }

    pub fn state(&self) -> &StateVector<T> {
        &self.state
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn ledger(&self) -> &ResourceLedger {
        &self.ledger
    }

    /// `(outcome, probability)` of every measurement so far.
    pub fn branch_record(&self) -> &[(usize, T)] {
        &self.branches
    }

    pub fn remote_parties(&self) -> usize {
        self.remotes
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn position(&self, reg: RegId) -> Result<usize> {
        self.registers.iter().position(|r| r.id == reg).ok_or(Error::UnknownRegister(reg.0))
    }

    pub fn register(&self, reg: RegId) -> Result<&Register> {
        Ok(&self.registers[self.position(reg)?])
    }

    /// Live system registers owned by `party`, in state order.
    pub fn system_registers(&self, party: PartyId) -> Vec<RegId> {
        self.registers.iter().filter(|r| r.owner == party && r.role == Role::System).map(|r| r.id).collect()
    }

    pub fn has_live_ancillas(&self) -> bool {
        self.registers.iter().any(|r| r.role != Role::System)
    }

    fn check_party(&self, party: PartyId) -> Result<()> {
        match party {
            PartyId::Alice => Ok(()),
            PartyId::Remote(i) if (1..=self.remotes).contains(&i) => Ok(()),
            other => Err(Error::UnknownParty(other)),
        }
    }

    fn append_register(&mut self, dim: usize, owner: PartyId, role: Role) -> RegId {
        let id = RegId(self.next_id);
        self.next_id += 1;
        self.registers.push(Register { id, dim, owner, role });
        id
    }

    /// Shares `(1/sqrt n) sum_m |m_a m_b>` between Alice and `remote`.
    pub fn distribute_entangled_pair(&mut self, n: usize, remote: PartyId) -> Result<(RegId, RegId)> {
        if remote.is_alice() {
            return Err(Error::NoChannel(PartyId::Alice, PartyId::Alice));
        }
        self.check_party(remote)?;
        if n < 2 {
            return Err(Error::Malformed("entangled pairs need dimension >= 2".into()));
        }
        let amp = T::lit(1.0 / (n as f64).sqrt());
        let mut amps = vec![czero(); n * n];
        for m in 0..n {
            amps[m * n + m] = num_complex::Complex::new(amp, T::zero());
        }
        let pair = StateVector::new(vec![n, n], amps)?;
        self.state = self.state.tensor(&pair);
        let a = self.append_register(n, PartyId::Alice, Role::AncillaA);
        let b = self.append_register(n, remote, Role::AncillaB);
        self.pairs.push(Pair { a, b, n, remote, used: false });
        self.ledger.record_pair(n, remote);
        Ok((a, b))
    }

    /// Claims the oldest unused `n`-level pair shared with `remote`.
    pub fn take_pair(&mut self, remote: PartyId, n: usize) -> Result<(RegId, RegId)> {
        let pair = self
            .pairs
            .iter_mut()
            .find(|p| !p.used && p.remote == remote && p.n == n)
            .ok_or(Error::MissingPair { n, remote })?;
        pair.used = true;
        Ok((pair.a, pair.b))
    }

    /// Fresh local register in `|0>`; consumes no shared resource.
    pub fn add_ancilla(&mut self, party: PartyId, dim: usize, role: Role) -> Result<RegId> {
        self.check_party(party)?;
        let zero = StateVector::basis(vec![dim], 0)?;
        self.state = self.state.tensor(&zero);
        Ok(self.append_register(dim, party, role))
    }

    fn local_positions(&self, party: PartyId, regs: &[RegId]) -> Result<Vec<usize>> {
        regs.iter()
            .map(|&r| {
                let pos = self.position(r)?;
                let owner = self.registers[pos].owner;
                if owner != party {
                    return Err(Error::LocalityViolation { party, register: r.0, owner });
                }
                Ok(pos)
            })
            .collect()
    }

    fn gate(&mut self, party: PartyId, op: &Operator<T>, regs: &[RegId], kind: GateKind) -> Result<()> {
        self.check_party(party)?;
        let positions = self.local_positions(party, regs)?;
        let dev = op.unitary_deviation();
        if dev > T::op_tol() {
            return Err(Error::NotUnitary(dev.as_f64()));
        }
        self.state = self.state.apply_on(op, &positions)?;
        self.transcript.push(Event::Gate { party, regs: regs.to_vec(), kind });
        Ok(())
    }

    /// Unitary on registers that all belong to `party`.
    pub fn apply_local(&mut self, party: PartyId, op: &Operator<T>, regs: &[RegId]) -> Result<()> {
        self.gate(party, op, regs, GateKind::Operation)
    }

    /// Local unitary conditioned on a received message; consumes one
    /// received message of `party`.
    pub fn apply_correction(&mut self, party: PartyId, op: &Operator<T>, regs: &[RegId]) -> Result<()> {
        match self.received.get(&party) {
            Some(&c) if c > 0 => {}
            _ => return Err(Error::CausalityViolation(party)),
        }
        self.gate(party, op, regs, GateKind::Correction)?;
        *self.received.get_mut(&party).expect("checked above") -= 1;
        Ok(())
    }

    /// Projective measurement of a local register; the register is removed.
    pub fn measure(&mut self, party: PartyId, reg: RegId, basis: &[StateVector<T>]) -> Result<(usize, T)> {
        self.check_party(party)?;
        let pos = self.local_positions(party, &[reg])?[0];
        let source = match self.forced.pop_front() {
            Some(k) => OutcomeSource::Forced(k),
            None => OutcomeSource::Sample(&mut self.rng),
        };
        let m = measure_projective(&self.state, pos, basis, source)?;
        self.state = m.reduced;
        self.registers.remove(pos);
        self.branches.push((m.outcome, m.prob));
        self.transcript.push(Event::Measure { party, reg, outcome: m.outcome, prob: m.prob.as_f64() });
        Ok((m.outcome, m.prob))
    }

    /// Sends one symbol of the given arity; every message involves Alice.
    pub fn send_classical(&mut self, from: PartyId, to: PartyId, symbol: usize, arity: usize) -> Result<()> {
        self.check_party(from)?;
        self.check_party(to)?;
        if from == to || !(from.is_alice() || to.is_alice()) {
            return Err(Error::NoChannel(from, to));
        }
        if symbol >= arity {
            return Err(Error::SymbolOutOfRange { symbol, arity });
        }
        self.transcript.push(Event::Message { from, to, symbol, arity });
        self.ledger.record_message(from, arity);
        self.inbox.entry(to).or_default().push_back(Message { from, symbol, arity });
        Ok(())
    }

    /// Oldest undelivered message addressed to `party`.
    pub fn receive(&mut self, party: PartyId) -> Option<Message> {
        let msg = self.inbox.get_mut(&party)?.pop_front()?;
        *self.received.entry(party).or_default() += 1;
        Some(msg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{computational_basis, entanglement_entropy, sigma_x};

    const BOB: PartyId = PartyId::Remote(1);

    fn qubit_session() -> Session<f64> {
        Session::new(&[2], &[BOB], StateVector::basis(vec![2], 0).unwrap(), 1).unwrap()
    }

    #[test]
    fn construction_guards() {
        let zero = StateVector::<f64>::basis(vec![2], 0).unwrap();
        assert!(matches!(Session::new(&[3], &[BOB], zero.clone(), 0), Err(Error::DimMismatch(_))));
        assert!(matches!(Session::new(&[2, 2], &[BOB], zero, 0), Err(Error::DimMismatch(_))));
        let three = StateVector::<f64>::basis(vec![2, 2, 2], 0).unwrap();
        let owners = [PartyId::Remote(1), PartyId::Remote(2), PartyId::Remote(3)];
        let s = Session::new(&[2, 2, 2], &owners, three, 0).unwrap();
        assert_eq!(s.remote_parties(), 3);
        assert_eq!(s.registers().len(), 3);
    }

    #[test]
    fn pair_distribution() {
        let mut s = qubit_session();
        let (a, b) = s.distribute_entangled_pair(2, BOB).unwrap();
        let pa = s.position(a).unwrap();
        let pb = s.position(b).unwrap();
        assert!((entanglement_entropy(s.state(), &[pa]).unwrap() - 1.0).abs() < 1e-12);
        assert!((entanglement_entropy(s.state(), &[pb]).unwrap() - 1.0).abs() < 1e-12);
        s.distribute_entangled_pair(3, BOB).unwrap();
        assert_eq!(s.ledger().entangled_pairs().len(), 2);
        assert!(matches!(s.distribute_entangled_pair(2, PartyId::Remote(2)), Err(Error::UnknownParty(_))));
        assert!(s.take_pair(BOB, 2).is_ok());
        assert!(matches!(s.take_pair(BOB, 2), Err(Error::MissingPair { .. })));
    }

    #[test]
    fn locality_enforced() {
        let mut s = qubit_session();
        let (a, b) = s.distribute_entangled_pair(2, BOB).unwrap();
        assert!(s.apply_local(PartyId::Alice, &sigma_x(), &[a]).is_ok());
        let sys = s.system_registers(BOB)[0];
        assert!(matches!(
            s.apply_local(PartyId::Alice, &sigma_x(), &[sys]),
            Err(Error::LocalityViolation { party: PartyId::Alice, .. })
        ));
        let xx = sigma_x::<f64>().kron(&sigma_x());
        assert!(matches!(s.apply_local(BOB, &xx, &[b, a]), Err(Error::LocalityViolation { .. })));
        assert!(matches!(s.measure(BOB, a, &computational_basis(2)), Err(Error::LocalityViolation { .. })));
    }

    #[test]
    fn classical_channel() {
        let mut s = qubit_session();
        s.send_classical(BOB, PartyId::Alice, 0, 2).unwrap();
        s.send_classical(PartyId::Alice, BOB, 2, 3).unwrap();
        assert_eq!(s.ledger().classical_to_alice(), 1);
        assert_eq!(s.ledger().from_alice_arities(), &[3]);
        assert!(matches!(
            s.send_classical(PartyId::Alice, BOB, 5, 3),
            Err(Error::SymbolOutOfRange { symbol: 5, arity: 3 })
        ));
        assert!(matches!(s.send_classical(BOB, BOB, 0, 2), Err(Error::NoChannel(..))));
        let msg = s.receive(PartyId::Alice).unwrap();
        assert_eq!((msg.from, msg.symbol), (BOB, 0));
        assert!(s.receive(PartyId::Alice).is_none());
    }

    #[test]
    fn correction_requires_message() {
        let mut s = qubit_session();
        let sys = s.system_registers(BOB)[0];
        assert!(matches!(s.apply_correction(BOB, &sigma_x(), &[sys]), Err(Error::CausalityViolation(_))));
        s.send_classical(PartyId::Alice, BOB, 1, 2).unwrap();
        s.receive(BOB).unwrap();
        s.apply_correction(BOB, &sigma_x(), &[sys]).unwrap();
        assert!(s.transcript().corrections_follow_messages());
        assert!(s.apply_correction(BOB, &sigma_x(), &[sys]).is_err());
    }

    #[test]
    fn forced_measurement_removes_register() {
        let mut s = qubit_session();
        let (a, _) = s.distribute_entangled_pair(2, BOB).unwrap();
        s.force_outcomes([1]);
        let (k, p) = s.measure(PartyId::Alice, a, &computational_basis(2)).unwrap();
        assert_eq!(k, 1);
        assert!((p - 0.5).abs() < 1e-14);
        assert_eq!(s.state().dims(), &[2, 2]);
        assert!(s.position(a).is_err());
        assert_eq!(s.branch_record(), &[(1, p)]);
    }
}
