use thiserror::Error;

use crate::protocol::PartyId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("operator is not hermitian (deviation {0:e})")]
    NonHermitianInput(f64),
    #[error("operator is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("operator is not an involution (deviation {0:e})")]
    NotInvolution(f64),
    #[error("U^n differs from the identity (deviation {0:e})")]
    NotRootOfUnity(f64),
    #[error("spectrum entry {0} is not an integer")]
    SpectrumNotInteger(f64),
    #[error("spectrum entries {0} and {1} coincide modulo {2}; no shift-operator lift exists")]
    SpectrumAliased(i64, i64, usize),
    #[error("measurement basis is not orthonormal (deviation {0:e})")]
    NonOrthonormalBasis(f64),
    #[error("forced outcome {outcome} has probability {prob:e}")]
    ImpossibleForcedOutcome { outcome: usize, prob: f64 },
    #[error("invalid bipartition: {0}")]
    BadBipartition(String),
    #[error("{party} may not act on register {register} owned by {owner}")]
    LocalityViolation { party: PartyId, register: usize, owner: PartyId },
    #[error("unknown party {0}")]
    UnknownParty(PartyId),
    #[error("unknown register {0}")]
    UnknownRegister(usize),
    #[error("symbol {symbol} out of range for arity {arity}")]
    SymbolOutOfRange { symbol: usize, arity: usize },
    #[error("no classical channel from {0} to {1}")]
    NoChannel(PartyId, PartyId),
    #[error("{0} applied a correction without a pending classical message")]
    CausalityViolation(PartyId),
    #[error("no unused {n}-level entangled pair shared with {remote}")]
    MissingPair { n: usize, remote: PartyId },
    #[error("family of size {0} exceeds the enumeration limit")]
    TooLarge(usize),
    #[error("chi-square test needs a nonempty count vector with at least one trial")]
    EmptyCounts,
    #[error("reconstructed process is not unitary (deviation {0:e})")]
    NonUnitaryProcess(f64),
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
}
