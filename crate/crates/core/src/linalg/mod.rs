//! Dense complex linear algebra over small composite register spaces.
//!
//! Index convention everywhere: the first register is the most significant
//! digit of a flattened basis index.

mod eigen;
mod entropy;
mod measure;
mod operator;
mod serde_impl;
mod state;

pub use eigen::{expi_hermitian, hermitian_eigen, hermitian_function, rank, singular_values, HermitianEigen};
pub use entropy::entanglement_entropy;
pub use measure::{
    computational_basis, fourier_basis, measure_projective, outcome_probabilities, sigma_x_basis, Measurement,
    OutcomeSource, MIN_FORCED_PROBABILITY,
};
pub use operator::{sigma_axis, sigma_x, sigma_y, sigma_z, Operator};
pub use state::{fidelity_up_to_phase, StateVector};

/// Kronecker product of two values of the same kind.
pub trait Tensor {
    fn tensor(&self, other: &Self) -> Self;
}

impl<T: crate::Real> Tensor for StateVector<T> {
    fn tensor(&self, other: &Self) -> Self {
        StateVector::tensor(self, other)
    }
}

impl<T: crate::Real> Tensor for Operator<T> {
    fn tensor(&self, other: &Self) -> Self {
        self.kron(other)
    }
}

pub fn tensor<X: Tensor>(a: &X, b: &X) -> X {
    a.tensor(b)
}
