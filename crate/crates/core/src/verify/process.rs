use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{Operator, StateVector};
use crate::scalar::{czero, Real};
use crate::scenario::Scenario;

/// Largest input dimension accepted for reconstruction.
const MAX_DIM: usize = 16;

/// Assembles the unitary implemented by `run` on inputs of shape `dims`.
///
/// Each computational basis input fixes a column up to its own phase; one
/// uniform superposition input then fixes the relative phases. The result
/// is determined up to a single global phase.
pub fn reconstruct_process<T: Real>(
    dims: &[usize],
    mut run: impl FnMut(&StateVector<T>) -> Result<StateVector<T>>,
) -> Result<Operator<T>> {
    let d: usize = dims.iter().product();
    if d > MAX_DIM {
        return Err(Error::TooLarge(d));
    }
    let columns: Vec<StateVector<T>> =
        (0..d).map(|j| StateVector::basis(dims.to_vec(), j).and_then(|e| run(&e))).collect::<Result<_>>()?;
    let amp = Complex::new(T::one() / T::lit(d as f64).sqrt(), T::zero());
    let sup = StateVector::new(dims.to_vec(), vec![amp; d])?;
    let out = run(&sup)?;
    let scale = T::lit(d as f64).sqrt();

    let mut mat = vec![czero::<T>(); d * d];
    for (j, col) in columns.iter().enumerate() {
        if col.dims() != dims {
            return Err(Error::DimMismatch(format!("process output dims {:?} vs input {dims:?}", col.dims())));
        }
        let phase = col.inner(&out)? * scale;
        for (i, z) in col.amps().iter().enumerate() {
            mat[i * d + j] = *z * phase;
        }
    }
    let op = Operator::new(dims.to_vec(), mat)?;
    let dev = op.unitary_deviation();
    if dev.as_f64() > 1e-8 {
        return Err(Error::NonUnitaryProcess(dev.as_f64()));
    }
    Ok(op)
}

/// Process matrix of a unitary scenario with every run forced onto the same
/// branch profile.
pub fn reconstruct_process_matrix<T: Real>(scenario: &Scenario<T>, forcing: &[usize]) -> Result<Operator<T>> {
    if !scenario.is_unitary() {
        return Err(Error::Malformed(format!("scenario {} does not implement a unitary", scenario.name())));
    }
    reconstruct_process(&scenario.system_dims(), |psi| Ok(scenario.run(psi, 0, 0, forcing)?.final_state))
}
