//! Named protocol configurations that can be run on any input state.

use crate::error::{Error, Result};
use crate::linalg::{fidelity_up_to_phase, Operator, StateVector};
use crate::protocol::{
    prepare_stator_n_level, prepare_stator_two_level, remote_cnot, remote_interaction, remote_measurement,
    remote_multi, remote_rotation_n_level, remote_rotation_two_level, MeasureMode, PartyId, ProtocolOutcome,
    ResourceLedger, Session, Transcript,
};
use crate::scalar::Real;
use crate::stator::{make_n_level_stator, make_two_level_stator, Generator, GeneratorSpec, Involution, NLevel};

const BOB: PartyId = PartyId::Remote(1);

#[derive(Clone, Debug, PartialEq)]
pub enum Scenario<T> {
    /// `exp(i alpha g)` on one remote qubit.
    Rotate2 { axis: Involution<T>, alpha: T },
    /// `exp(i sum_k alpha_k L_Z^k)` on one remote n-level system.
    RotateN { spec: NLevel<T>, angles: Vec<T> },
    /// Product family over `N` remote parties.
    Multi { spec: GeneratorSpec<T> },
    /// `exp(i lambda O_A (x) g)` between Alice's system and a remote one.
    Interact { axis: Involution<T>, op_a: Operator<T>, lambda: T },
    /// Remote CNOT in the `sigma_x` bases.
    Cnot,
    /// Remote measurement of `g` with a two-state pointer.
    Measure { axis: Involution<T>, mode: MeasureMode },
    /// Stator preparation only; the output keeps Alice's ancilla first.
    Prepare { generator: Generator<T> },
}

/// Everything a single run produced.
#[derive(Clone, Debug)]
pub struct ScenarioRun<T> {
    /// Output state; for [`Scenario::Prepare`] this is `(a, system)`.
    pub final_state: StateVector<T>,
    pub expected: StateVector<T>,
    pub fidelity: T,
    pub transcript: Transcript,
    pub ledger: ResourceLedger,
    pub branch_record: Vec<(usize, T)>,
    /// Measured eigenvalue, for [`Scenario::Measure`].
    pub outcome: Option<i8>,
    pub coupling_sign: Option<i8>,
}

impl<T: Real> Scenario<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Rotate2 { .. } => "rotate2",
            Scenario::RotateN { .. } => "rotaten",
            Scenario::Multi { .. } => "multi",
            Scenario::Interact { .. } => "interact",
            Scenario::Cnot => "cnot",
            Scenario::Measure { .. } => "measure",
            Scenario::Prepare { .. } => "prepare",
        }
    }

    /// Dims of the input state.
    pub fn system_dims(&self) -> Vec<usize> {
        match self {
            Scenario::Rotate2 { axis, .. } | Scenario::Measure { axis, .. } => axis.dims().to_vec(),
            Scenario::RotateN { spec, .. } => spec.dims().to_vec(),
            Scenario::Multi { spec } => spec.generator.system_dims(),
            Scenario::Interact { axis, op_a, .. } => op_a.dims().iter().chain(axis.dims()).copied().collect(),
            Scenario::Cnot => vec![2, 2],
            Scenario::Prepare { generator } => generator.system_dims(),
        }
    }

    /// Owner of each input register.
    pub fn owners(&self) -> Vec<PartyId> {
        match self {
            Scenario::Multi { spec } => spec
                .generator
                .parts()
                .iter()
                .enumerate()
                .flat_map(|(i, p)| std::iter::repeat_n(PartyId::Remote(i + 1), p.system_dims().len()))
                .collect(),
            Scenario::Interact { axis, op_a, .. } => std::iter::repeat_n(PartyId::Alice, op_a.dims().len())
                .chain(std::iter::repeat_n(BOB, axis.dims().len()))
                .collect(),
            Scenario::Cnot => vec![PartyId::Alice, BOB],
            _ => vec![BOB; self.system_dims().len()],
        }
    }

    /// Angles of the run, in the order the report lists them.
    pub fn angles(&self) -> Vec<T> {
        match self {
            Scenario::Rotate2 { alpha, .. } => vec![*alpha],
            Scenario::RotateN { angles, .. } => angles.clone(),
            Scenario::Multi { spec } => spec.angles.clone(),
            Scenario::Interact { lambda, .. } => vec![*lambda],
            Scenario::Cnot => vec![T::FRAC_PI_4()],
            Scenario::Measure { .. } | Scenario::Prepare { .. } => Vec::new(),
        }
    }

    /// Whether the scenario implements a unitary on its input.
    pub fn is_unitary(&self) -> bool {
        !matches!(self, Scenario::Measure { .. } | Scenario::Prepare { .. })
    }

    /// Runs the scenario once. `forced` fixes the leading measurement
    /// outcomes; the rest are sampled from the `(seed, stream)` generator.
    pub fn run(&self, input: &StateVector<T>, seed: u64, stream: u64, forced: &[usize]) -> Result<ScenarioRun<T>> {
        let dims = self.system_dims();
        let mut s = Session::new(&dims, &self.owners(), input.clone(), seed)?.with_stream(stream);
        s.force_outcomes(forced.iter().copied());
        let from_outcome = |o: ProtocolOutcome<T>| {
            let expected = o.initial_state.apply(&o.target_unitary)?;
            Ok(ScenarioRun {
                final_state: o.final_system_state,
                expected,
                fidelity: o.fidelity,
                transcript: o.transcript,
                ledger: o.ledger,
                branch_record: o.branch_record,
                outcome: None,
                coupling_sign: None,
            })
        };
        match self {
            Scenario::Rotate2 { axis, alpha } => from_outcome(remote_rotation_two_level(&mut s, BOB, axis, *alpha)?),
            Scenario::RotateN { spec, angles } => from_outcome(remote_rotation_n_level(&mut s, BOB, spec, angles)?),
            Scenario::Multi { spec } => from_outcome(remote_multi(&mut s, spec)?),
            Scenario::Interact { axis, op_a, lambda } => {
                from_outcome(remote_interaction(&mut s, BOB, axis, op_a, *lambda)?)
            }
            Scenario::Cnot => from_outcome(remote_cnot(&mut s, BOB)?),
            Scenario::Measure { axis, mode } => {
                let m = remote_measurement(&mut s, BOB, axis, *mode)?;
                Ok(ScenarioRun {
                    final_state: m.post_state,
                    expected: m.expected,
                    fidelity: m.fidelity,
                    transcript: m.transcript,
                    ledger: m.ledger,
                    branch_record: m.branch_record,
                    outcome: Some(m.outcome),
                    coupling_sign: m.coupling_sign,
                })
            }
            Scenario::Prepare { generator } => {
                let (prep, stator) = match generator {
                    Generator::Involution(g) => {
                        s.distribute_entangled_pair(2, BOB)?;
                        (prepare_stator_two_level(&mut s, BOB, g)?, make_two_level_stator(g))
                    }
                    Generator::NLevel(nl) => {
                        s.distribute_entangled_pair(nl.n(), BOB)?;
                        (prepare_stator_n_level(&mut s, BOB, nl)?, make_n_level_stator(nl.n(), &nl.clock())?)
                    }
                    Generator::Product(_) => {
                        return Err(Error::InvalidGenerator("prepare takes a single-party generator".into()))
                    }
                };
                let a = s.position(prep.alice)?;
                let order: Vec<usize> =
                    std::iter::once(a).chain((0..s.registers().len()).filter(|&i| i != a)).collect();
                let final_state = s.state().permute(&order)?;
                let (expected, _) = stator.apply(input)?;
                let fidelity = fidelity_up_to_phase(&final_state, &expected)?;
                Ok(ScenarioRun {
                    final_state,
                    expected,
                    fidelity,
                    transcript: s.transcript().clone(),
                    ledger: s.ledger().clone(),
                    branch_record: s.branch_record().to_vec(),
                    outcome: None,
                    coupling_sign: None,
                })
            }
        }
    }
}
