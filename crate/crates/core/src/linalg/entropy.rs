use super::eigen::hermitian_eigen;
use super::operator::Operator;
use super::state::{strides, StateVector};
use crate::error::{Error, Result};
use crate::scalar::{czero, Real};

/// Von Neumann entropy (bits) of the reduced state on `subset`.
pub fn entanglement_entropy<T: Real>(state: &StateVector<T>, subset: &[usize]) -> Result<T> {
    let dims = state.dims();
    let r = dims.len();
    let mut in_subset = vec![false; r];
    for &k in subset {
        if k >= r || std::mem::replace(&mut in_subset[k], true) {
            return Err(Error::BadBipartition(format!("{subset:?} is not a set of registers below {r}")));
        }
    }
    if subset.is_empty() || subset.len() == r {
        return Err(Error::BadBipartition(format!("{subset:?} must be a nonempty proper subset")));
    }
    let rest: Vec<usize> = (0..r).filter(|k| !in_subset[*k]).collect();
    let d_left: usize = subset.iter().map(|&k| dims[k]).product();
    let d_right: usize = rest.iter().map(|&k| dims[k]).product();

    // M[left][right] = psi, then rho = M M^dagger on the smaller side
    let st = strides(dims);
    let index_of = |regs: &[usize], full: usize| -> usize {
        regs.iter().fold(0, |acc, &k| acc * dims[k] + (full / st[k]) % dims[k])
    };
    let mut m = vec![czero::<T>(); d_left * d_right];
    for (full, &z) in state.amps().iter().enumerate() {
        m[index_of(subset, full) * d_right + index_of(&rest, full)] = z;
    }
    let (rows, cols, transpose) = if d_left <= d_right { (d_left, d_right, false) } else { (d_right, d_left, true) };
    let at = |i: usize, j: usize| if transpose { m[j * d_right + i] } else { m[i * d_right + j] };
    let mut rho = vec![czero::<T>(); rows * rows];
    for i in 0..rows {
        for j in i..rows {
            let z = (0..cols).fold(czero(), |acc, k| acc + at(i, k) * at(j, k).conj());
            rho[i * rows + j] = z;
            rho[j * rows + i] = z.conj();
        }
    }
    let eig = hermitian_eigen(&Operator::new(vec![rows], rho)?)?;
    let cutoff = T::epsilon() * T::lit(rows as f64);
    let entropy = eig.values.into_iter().filter(|&l| l > cutoff).fold(T::zero(), |acc, l| acc - l * l.log2());
    Ok(entropy.max(T::zero()))
}
