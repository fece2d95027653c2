//! Simulation and verification of entanglement-assisted remote operations.
//!
//! A *stator* pairs basis states of one party (Alice) with operators acting on
//! a remote party's system, `S = sum_j |j_A> (x) O_j`. When an Alice-side
//! operator satisfies the eigenoperator relation `O_A S = lambda_B S`, any
//! analytic function of `O_A` applied locally by Alice acts on the remote
//! system as the same function of `lambda_B`. Preparing such a stator from a
//! shared entangled pair and then exploiting that relation yields
//! deterministic remote rotations, interactions and measurements using only
//! local operations and classical communication.
//!
//! The crate is organized as:
//!
//! - [`linalg`]: dense complex states and operators, hermitian exponentials,
//!   projective measurement and entanglement entropy.
//! - [`stator`]: stator builders, the shift operator, generator lifts and
//!   eigenoperator residuals.
//! - [`protocol`]: a locality-enforcing session (parties, registers,
//!   classical channel, resource ledger) and every remote protocol.
//! - [`verify`]: independent oracles, eigenoperator counting, chi-square
//!   tests and process-matrix reconstruction.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`.

pub mod error;
pub mod linalg;
pub mod protocol;
pub mod report;
pub mod scalar;
pub mod scenario;
pub mod stator;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

pub type StateVector = linalg::StateVector<f64>;
pub type Operator = linalg::Operator<f64>;
pub type Stator = stator::Stator<f64>;
pub type Involution = stator::Involution<f64>;
pub type NLevel = stator::NLevel<f64>;
pub type Generator = stator::Generator<f64>;
pub type GeneratorSpec = stator::GeneratorSpec<f64>;
pub type Session = protocol::Session<f64>;
pub type ProtocolOutcome = protocol::ProtocolOutcome<f64>;
pub type Scenario = scenario::Scenario<f64>;

pub type StateVector32 = linalg::StateVector<f32>;
pub type Operator32 = linalg::Operator<f32>;
pub type Stator32 = stator::Stator<f32>;
pub type Session32 = protocol::Session<f32>;
