use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::rank;
use crate::stator::{make_n_level_stator, power_tuples, product_stator, shift_operator, NLevel};

/// Largest `n^N` [`count_eigenoperators`] accepts.
pub const MAX_FAMILY_DIM: usize = 256;
/// Singular values at or below this count as zero.
pub const RANK_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OperatorFamilyReport {
    /// `(n, N)`
    pub dims: (usize, usize),
    pub generated: usize,
    pub independent: usize,
    pub expected: usize,
    /// Largest eigenoperator residual over the candidates.
    pub max_residual: f64,
}

/// Enumerates the product eigenoperators `(x)_i U_i^{k_i}` of `N` n-level
/// stators and counts how many are linearly independent.
pub fn count_eigenoperators(n: usize, parties: usize) -> Result<OperatorFamilyReport> {
    if n < 2 || parties == 0 {
        return Err(Error::InvalidGenerator(format!("need n >= 2 and N >= 1, got n={n}, N={parties}")));
    }
    let dim = (0..parties).try_fold(1usize, |acc, _| acc.checked_mul(n)).unwrap_or(usize::MAX);
    if dim > MAX_FAMILY_DIM {
        return Err(Error::TooLarge(dim));
    }
    let u = NLevel::<f64>::standard(n)?.clock();
    let v = shift_operator::<f64>(n);
    let single = make_n_level_stator(n, &u)?;
    let stator = product_stator(&vec![single; parties])?;

    let mut columns = Vec::new();
    let mut max_residual = 0.0_f64;
    for powers in power_tuples(&vec![n; parties]) {
        let (b, a) = powers
            .iter()
            .map(|&k| (u.pow(k), v.pow(k)))
            .reduce(|(b, a), (bk, ak)| (b.kron(&bk), a.kron(&ak)))
            .expect("N >= 1");
        max_residual = max_residual.max(stator.eigenoperator_residual(&a, &b)?);
        columns.push(b.entries().to_vec());
    }
    let independent = rank(&columns, RANK_TOL)?;
    Ok(OperatorFamilyReport {
        dims: (n, parties),
        generated: columns.len(),
        independent,
        expected: dim - 1,
        max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_families() {
        let r = count_eigenoperators(2, 1).unwrap();
        assert_eq!((r.generated, r.independent, r.expected), (1, 1, 1));
        let r = count_eigenoperators(2, 3).unwrap();
        assert_eq!(r.independent, 7);
        let r = count_eigenoperators(3, 2).unwrap();
        assert_eq!(r.independent, 8);
        assert!(r.max_residual < 1e-10);
    }

    #[test]
    fn guards() {
        assert_eq!(count_eigenoperators(2, 9), Err(Error::TooLarge(512)));
        assert!(count_eigenoperators(1, 2).is_err());
        assert!(count_eigenoperators(2, 0).is_err());
    }
}
