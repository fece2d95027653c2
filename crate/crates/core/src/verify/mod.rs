//! Independent oracles and statistics used to check the protocols.

mod batch;
mod chisq;
mod count;
mod oracle;
mod process;

pub use batch::{run_batch, BatchReport, ChannelCounts};
pub use chisq::{
    chi_square_homogeneity, chi_square_uniform, critical_value, ChiSquareReport, HomogeneityReport, SIGNIFICANCE,
};
pub use count::{count_eigenoperators, OperatorFamilyReport, MAX_FAMILY_DIM, RANK_TOL};
pub use oracle::{expm, oracle_direct, target_unitary};
pub use process::{reconstruct_process, reconstruct_process_matrix};
