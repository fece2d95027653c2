//! The remote protocols, written as explicit steps over a [`Session`].

use num_complex::Complex;

use super::ledger::ResourceLedger;
use super::session::{RegId, Role, Session};
use super::transcript::Transcript;
use super::PartyId;
use crate::error::{Error, Result};
use crate::linalg::{
    computational_basis, expi_hermitian, fidelity_up_to_phase, fourier_basis, sigma_x, sigma_x_basis, sigma_z,
    Operator, StateVector,
};
use crate::scalar::{cone, root_of_unity, Real, C};
use crate::stator::{lift_generator, Generator, GeneratorSpec, Involution, NLevel};

/// Alice's half of a prepared stator toward one remote party.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PreparedStator {
    pub remote: PartyId,
    /// Alice's ancilla; the stator index lives here.
    pub alice: RegId,
    /// Dimension of the ancilla.
    pub n: usize,
}

#[derive(Clone, Debug)]
pub struct ProtocolOutcome<T> {
    pub initial_state: StateVector<T>,
    /// State of the system registers once every ancilla is measured out.
    pub final_system_state: StateVector<T>,
    /// Target unitary on the full system, computed directly.
    pub target_unitary: Operator<T>,
    pub fidelity: T,
    pub transcript: Transcript,
    pub ledger: ResourceLedger,
    pub branch_record: Vec<(usize, T)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureMode {
    /// Alice couples the pointer only after the preparation cbit arrived.
    WaitForCbit,
    /// Alice couples immediately; the realized coupling sign is unknown to
    /// her until the preparation cbit arrives.
    Instantaneous,
}

#[derive(Clone, Debug)]
pub struct RemoteMeasurement<T> {
    /// Measured eigenvalue of the remote observable.
    pub outcome: i8,
    /// Born probability of `outcome`.
    pub prob: T,
    pub post_state: StateVector<T>,
    /// Normalized projection of the initial state onto the outcome eigenspace.
    pub expected: StateVector<T>,
    pub fidelity: T,
    /// Instantaneous mode only: sign of the coupling that was actually
    /// realized before the cbit arrived.
    pub coupling_sign: Option<i8>,
    pub transcript: Transcript,
    pub ledger: ResourceLedger,
    pub branch_record: Vec<(usize, T)>,
}

fn remote_positions<T: Real>(s: &Session<T>, remote: PartyId, dims: &[usize]) -> Result<Vec<RegId>> {
    let regs = s.system_registers(remote);
    let have: Vec<usize> = regs.iter().map(|&r| s.register(r).map(|r| r.dim)).collect::<Result<_>>()?;
    if have != dims {
        return Err(Error::DimMismatch(format!("{remote} holds system dims {have:?}, generator acts on {dims:?}")));
    }
    Ok(regs)
}

fn controlled_powers<T: Real>(u: &Operator<T>, n: usize) -> Operator<T> {
    let mut dims = vec![n];
    dims.extend_from_slice(u.dims());
    let mut total = Operator::zeros(dims.clone());
    let mut power = Operator::identity(u.dims().to_vec());
    for m in 0..n {
        let mut proj = Operator::zeros(vec![n]);
        proj.set(m, m, cone());
        total = &total + &proj.kron(&power);
        power = &power * u;
    }
    total.with_dims(dims).expect("dims built above")
}

/// Remote half of the two-level preparation: controlled-`g` from the pair
/// onto the system, then a `sigma_x` measurement of the remote ancilla.
///
/// Returns Alice's ancilla and the outcome that still has to be sent.
pub fn remote_half_two_level<T: Real>(
    s: &mut Session<T>,
    remote: PartyId,
    g: &Involution<T>,
) -> Result<(RegId, usize)> {
    let targets = remote_positions(s, remote, g.dims())?;
    let (a, b) = s.take_pair(remote, 2)?;
    let cg = controlled_powers(g.operator(), 2);
    let regs: Vec<RegId> = std::iter::once(b).chain(targets).collect();
    s.apply_local(remote, &cg, &regs)?;
    let (k, _) = s.measure(remote, b, &sigma_x_basis())?;
    Ok((a, k))
}

/// Sends the remote outcome to Alice, who fixes the `-` branch with a
/// phase flip on her ancilla.
pub fn finish_two_level_preparation<T: Real>(
    s: &mut Session<T>,
    remote: PartyId,
    alice: RegId,
    outcome: usize,
) -> Result<PreparedStator> {
    s.send_classical(remote, PartyId::Alice, outcome, 2)?;
    let msg = s.receive(PartyId::Alice).ok_or(Error::CausalityViolation(PartyId::Alice))?;
    if msg.symbol == 1 {
        s.apply_correction(PartyId::Alice, &sigma_z(), &[alice])?;
    }
    Ok(PreparedStator { remote, alice, n: 2 })
}

/// Turns a shared qubit pair into the stator `|0_a> I + |1_a> g` acting on
/// the remote system.
pub fn prepare_stator_two_level<T: Real>(
    s: &mut Session<T>,
    remote: PartyId,
    g: &Involution<T>,
) -> Result<PreparedStator> {
    let (a, k) = remote_half_two_level(s, remote, g)?;
    finish_two_level_preparation(s, remote, a, k)
}

/// Turns a shared `n`-level pair into the stator `sum_m |m_a> U^m`, with
/// `U` the clock of `spec`.
pub fn prepare_stator_n_level<T: Real>(
    s: &mut Session<T>,
    remote: PartyId,
    spec: &NLevel<T>,
) -> Result<PreparedStator> {
    let n = spec.n();
    let targets = remote_positions(s, remote, spec.dims())?;
    let (a, b) = s.take_pair(remote, n)?;
    let cu = controlled_powers(&spec.clock(), n);
    let regs: Vec<RegId> = std::iter::once(b).chain(targets).collect();
    s.apply_local(remote, &cu, &regs)?;
    let (k, _) = s.measure(remote, b, &fourier_basis(n))?;
    s.send_classical(remote, PartyId::Alice, k, n)?;
    let msg = s.receive(PartyId::Alice).ok_or(Error::CausalityViolation(PartyId::Alice))?;
    if msg.symbol != 0 {
        // outcome k leaves phases w^{-km} on |m_a>
        let phases: Vec<C<T>> = (0..n).map(|m| root_of_unity((msg.symbol * m) as i64, n)).collect();
        let fix = Operator::diagonal(vec![n], &phases)?;
        s.apply_correction(PartyId::Alice, &fix, &[a])?;
    }
    Ok(PreparedStator { remote, alice: a, n })
}

fn prepare<T: Real>(s: &mut Session<T>, remote: PartyId, part: &Generator<T>) -> Result<PreparedStator> {
    match part {
        Generator::Involution(g) => {
            s.distribute_entangled_pair(2, remote)?;
            prepare_stator_two_level(s, remote, g)
        }
        Generator::NLevel(nl) => {
            s.distribute_entangled_pair(nl.n(), remote)?;
            prepare_stator_n_level(s, remote, nl)
        }
        Generator::Product(_) => Err(Error::InvalidGenerator("nested products are not supported".into())),
    }
}

/// Alice-side partner of a party's generator: `sigma_x` or the lift.
fn alice_generator<T: Real>(part: &Generator<T>) -> Result<Operator<T>> {
    match part {
        Generator::Involution(_) => Ok(sigma_x()),
        Generator::NLevel(nl) => lift_generator(nl),
        Generator::Product(_) => Err(Error::InvalidGenerator("nested products are not supported".into())),
    }
}

/// `sum_k alpha_k (x)_i ops_i^{k_i}`
fn power_sum<T: Real>(spec: &GeneratorSpec<T>, ops: &[Operator<T>]) -> Operator<T> {
    let dims: Vec<usize> = ops.iter().flat_map(|o| o.dims().to_vec()).collect();
    let mut total = Operator::zeros(dims.clone());
    for (powers, angle) in spec.terms() {
        if angle == T::zero() {
            continue;
        }
        let term = ops
            .iter()
            .zip(&powers)
            .map(|(op, &k)| op.pow(k))
            .reduce(|acc, x| acc.kron(&x))
            .expect("at least one party");
        total = &total + &term.scale_real(angle);
    }
    total.with_dims(dims).expect("dims built above")
}

/// Remote correction after Alice reported outcome `m` for this party.
fn correction<T: Real>(part: &Generator<T>, m: usize) -> Option<Operator<T>> {
    if m == 0 {
        return None;
    }
    match part {
        // U_pi = exp(i pi g / 2) = i g
        Generator::Involution(g) => Some(g.operator().scale(Complex::new(T::zero(), T::one()))),
        Generator::NLevel(nl) => Some(nl.clock().pow(nl.n() - m)),
        Generator::Product(_) => None,
    }
}

fn system_positions<T: Real>(s: &Session<T>, regs: &[RegId]) -> Result<Vec<usize>> {
    regs.iter().map(|&r| s.position(r)).collect()
}

fn check_fresh<T: Real>(s: &Session<T>) -> Result<()> {
    if s.has_live_ancillas() {
        return Err(Error::Malformed("one-call protocols expect a session without ancillas".into()));
    }
    Ok(())
}

fn outcome<T: Real>(
    s: &Session<T>,
    initial: StateVector<T>,
    target_unitary: Operator<T>,
) -> Result<ProtocolOutcome<T>> {
    let final_system_state = s.state().clone();
    let expected = initial.apply(&target_unitary)?;
    let fidelity = fidelity_up_to_phase(&final_system_state, &expected)?;
    Ok(ProtocolOutcome {
        initial_state: initial,
        final_system_state,
        target_unitary,
        fidelity,
        transcript: s.transcript().clone(),
        ledger: s.ledger().clone(),
        branch_record: s.branch_record().to_vec(),
    })
}

/// Remote operation `exp(i sum_k alpha_k (x)_i G_i^{k_i})` on the systems of
/// `B_1..B_N`, where part `i` of the generator belongs to `Remote(i + 1)`.
///
/// Alice holds one stator per party, applies the lifted operator across her
/// ancillas, measures them and sends one symbol to each party, who applies
/// a power correction.
pub fn remote_multi<T: Real>(s: &mut Session<T>, spec: &GeneratorSpec<T>) -> Result<ProtocolOutcome<T>> {
    check_fresh(s)?;
    let initial = s.state().clone();
    let parts = spec.generator.parts();
    let parties: Vec<PartyId> = (1..=parts.len()).map(PartyId::Remote).collect();

    let mut system_regs = Vec::new();
    let mut remote_gens = Vec::with_capacity(parts.len());
    for (part, &p) in parts.iter().zip(&parties) {
        let dims = match part {
            Generator::Involution(g) => g.dims().to_vec(),
            Generator::NLevel(nl) => nl.dims().to_vec(),
            Generator::Product(_) => return Err(Error::InvalidGenerator("nested products are not supported".into())),
        };
        system_regs.extend(remote_positions(s, p, &dims)?);
        remote_gens.push(part.remote_generator());
    }
    let target_local = expi_hermitian(&power_sum(spec, &remote_gens), T::one())?;
    let target_unitary = target_local.embed(&system_positions(s, &system_regs)?, initial.dims())?;

    let alice_ops: Vec<Operator<T>> = parts.iter().map(alice_generator).collect::<Result<_>>()?;
    let prepared: Vec<PreparedStator> =
        parts.iter().zip(&parties).map(|(part, &p)| prepare(s, p, part)).collect::<Result<_>>()?;

    let ancillas: Vec<RegId> = prepared.iter().map(|p| p.alice).collect();
    let gate = expi_hermitian(&power_sum(spec, &alice_ops), T::one())?;
    s.apply_local(PartyId::Alice, &gate, &ancillas)?;

    for (part, prep) in parts.iter().zip(&prepared) {
        let (m, _) = s.measure(PartyId::Alice, prep.alice, &computational_basis(prep.n))?;
        s.send_classical(PartyId::Alice, prep.remote, m, prep.n)?;
        let msg = s.receive(prep.remote).ok_or(Error::CausalityViolation(prep.remote))?;
        if let Some(fix) = correction(part, msg.symbol) {
            let regs = s.system_registers(prep.remote);
            s.apply_correction(prep.remote, &fix, &regs)?;
        }
    }
    outcome(s, initial, target_unitary)
}

/// `exp(i alpha g)` on the system of `remote`: one ebit and one cbit each way.
pub fn remote_rotation_two_level<T: Real>(
    s: &mut Session<T>,
    remote: PartyId,
    g: &Involution<T>,
    alpha: T,
) -> Result<ProtocolOutcome<T>> {
    let spec = GeneratorSpec::involution(g.clone(), alpha)?;
    single_party(s, remote, &spec)
}

/// `exp(i sum_k alpha_k L_Z^k)` on the system of `remote`; angle `k - 1`
/// multiplies `L_Z^k`.
pub fn remote_rotation_n_level<T: Real>(
    s: &mut Session<T>,
    remote: PartyId,
    spec: &NLevel<T>,
    angles: &[T],
) -> Result<ProtocolOutcome<T>> {
    let spec = GeneratorSpec::n_level(spec.clone(), angles.to_vec())?;
    single_party(s, remote, &spec)
}

fn single_party<T: Real>(s: &mut Session<T>, remote: PartyId, spec: &GeneratorSpec<T>) -> Result<ProtocolOutcome<T>> {
    // remote_multi addresses parts by position; only Remote(1) lines up
    if remote != PartyId::Remote(1) {
        return Err(Error::UnknownParty(remote));
    }
    remote_multi(s, spec)
}

fn interaction_steps<T: Real>(
    s: &mut Session<T>,
    remote: PartyId,
    g: &Involution<T>,
    op_a: &Operator<T>,
    lambda: T,
) -> Result<(Vec<RegId>, Vec<RegId>)> {
    let dev = op_a.hermitian_deviation();
    if dev > T::op_tol() * op_a.frobenius_norm().max(T::one()) {
        return Err(Error::NonHermitianInput(dev.as_f64()));
    }
    let alice_regs = s.system_registers(PartyId::Alice);
    let alice_dims: Vec<usize> = alice_regs.iter().map(|&r| s.register(r).map(|r| r.dim)).collect::<Result<_>>()?;
    if alice_dims != op_a.dims() {
        return Err(Error::DimMismatch(format!("O_A acts on {:?}, Alice holds {alice_dims:?}", op_a.dims())));
    }
    let remote_regs = remote_positions(s, remote, g.dims())?;
    s.distribute_entangled_pair(2, remote)?;
    let prep = prepare_stator_two_level(s, remote, g)?;

    let gate = expi_hermitian(&op_a.kron(&sigma_x()), lambda)?;
    let regs: Vec<RegId> = alice_regs.iter().copied().chain(std::iter::once(prep.alice)).collect();
    s.apply_local(PartyId::Alice, &gate, &regs)?;
    let (m, _) = s.measure(PartyId::Alice, prep.alice, &computational_basis(2))?;
    s.send_classical(PartyId::Alice, remote, m, 2)?;
    let msg = s.receive(remote).ok_or(Error::CausalityViolation(remote))?;
    if let Some(fix) = correction(&Generator::Involution(g.clone()), msg.symbol) {
        s.apply_correction(remote, &fix, &remote_regs)?;
    }
    Ok((alice_regs, remote_regs))
}

/// `exp(i lambda O_A (x) g)` between Alice's own system and the system of
/// `remote`, using one ebit and one cbit each way.
pub fn remote_interaction<T: Real>(
    s: &mut Session<T>,
    remote: PartyId,
    g: &Involution<T>,
    op_a: &Operator<T>,
    lambda: T,
) -> Result<ProtocolOutcome<T>> {
    check_fresh(s)?;
    let initial = s.state().clone();
    let (alice_regs, remote_regs) = interaction_steps(s, remote, g, op_a, lambda)?;
    let local = expi_hermitian(&op_a.kron(g.operator()), lambda)?;
    let regs: Vec<RegId> = alice_regs.into_iter().chain(remote_regs).collect();
    let target = local.embed(&system_positions(s, &regs)?, initial.dims())?;
    outcome(s, initial, target)
}

/// CNOT in the `sigma_x` bases between Alice's qubit and the qubit of
/// `remote`: `exp(i pi/4 sigma_x (x) (1 - sigma_x))`.
pub fn remote_cnot<T: Real>(s: &mut Session<T>, remote: PartyId) -> Result<ProtocolOutcome<T>> {
    check_fresh(s)?;
    let initial = s.state().clone();
    let x = sigma_x::<T>();
    let quarter = T::FRAC_PI_4();
    let (alice_regs, remote_regs) = interaction_steps(s, remote, &Involution::new(x.clone())?, &x, -quarter)?;
    s.apply_local(PartyId::Alice, &expi_hermitian(&x, quarter)?, &alice_regs)?;

    let coupling = x.kron(&(&Operator::identity(vec![2]) - &x));
    let local = expi_hermitian(&coupling, quarter)?;
    let regs: Vec<RegId> = alice_regs.into_iter().chain(remote_regs).collect();
    let target = local.embed(&system_positions(s, &regs)?, initial.dims())?;
    outcome(s, initial, target)
}

/// Measures the observable `g` of the remote system from Alice's side with
/// a two-state pointer.
///
/// The pointer is flipped iff Alice's ancilla is in the `-1` eigenstate of
/// `sigma_x`, which on the stator is the `-1` eigenspace of `g`; reading the
/// pointer gives the outcome. Alice then measures her ancilla and the remote
/// party undoes the leftover `g` power.
pub fn remote_measurement<T: Real>(
    s: &mut Session<T>,
    remote: PartyId,
    g: &Involution<T>,
    mode: MeasureMode,
) -> Result<RemoteMeasurement<T>> {
    check_fresh(s)?;
    let initial = s.state().clone();
    let remote_regs = remote_positions(s, remote, g.dims())?;
    s.distribute_entangled_pair(2, remote)?;
    let (a, k) = remote_half_two_level(s, remote, g)?;
    let prep = match mode {
        MeasureMode::WaitForCbit => Some(finish_two_level_preparation(s, remote, a, k)?),
        MeasureMode::Instantaneous => None,
    };

    let pointer = s.add_ancilla(PartyId::Alice, 2, Role::Pointer)?;
    let half = T::lit(0.5);
    let id = Operator::<T>::identity(vec![2]);
    let plus = (&id + &sigma_x()).scale_real(half);
    let minus = (&id - &sigma_x()).scale_real(half);
    let coupling = &plus.kron(&id) + &minus.kron(&sigma_x());
    s.apply_local(PartyId::Alice, &coupling, &[a, pointer])?;
    let (r, prob) = s.measure(PartyId::Alice, pointer, &computational_basis(2))?;
    let raw: i8 = if r == 0 { 1 } else { -1 };

    let (outcome_sign, coupling_sign) = match prep {
        Some(_) => (raw, None),
        None => {
            finish_two_level_preparation(s, remote, a, k)?;
            let sign: i8 = if k == 0 { 1 } else { -1 };
            (raw * sign, Some(sign))
        }
    };

    let (j, _) = s.measure(PartyId::Alice, a, &computational_basis(2))?;
    s.send_classical(PartyId::Alice, remote, j, 2)?;
    let msg = s.receive(remote).ok_or(Error::CausalityViolation(remote))?;
    if let Some(fix) = correction(&Generator::Involution(g.clone()), msg.symbol) {
        s.apply_correction(remote, &fix, &remote_regs)?;
    }

    let sign = T::lit(outcome_sign as f64);
    let projector = (&Operator::identity(g.dims().to_vec()) + &g.operator().scale_real(sign)).scale_real(half);
    let full = projector.embed(&system_positions(s, &remote_regs)?, initial.dims())?;
    let amps = full.apply_to(initial.amps())?;
    let expected = StateVector::normalized(initial.dims().to_vec(), amps)?;
    let post_state = s.state().clone();
    let fidelity = fidelity_up_to_phase(&post_state, &expected)?;
    Ok(RemoteMeasurement {
        outcome: outcome_sign,
        prob,
        post_state,
        expected,
        fidelity,
        coupling_sign,
        transcript: s.transcript().clone(),
        ledger: s.ledger().clone(),
        branch_record: s.branch_record().to_vec(),
    })
}
