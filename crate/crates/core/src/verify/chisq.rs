use serde::Serialize;

use crate::error::{Error, Result};

/// Significance level of every chi-square decision.
pub const SIGNIFICANCE: f64 = 0.001;

// upper 0.001 quantiles of chi-square, dof 1..15
const CRITICAL: [f64; 15] = [
    10.828, 13.816, 16.266, 18.467, 20.515, 22.458, 24.322, 26.124, 27.877, 29.588, 31.264, 32.909, 34.528, 36.123,
    37.697,
];

/// Critical value at [`SIGNIFICANCE`]; tabulated up to 15 degrees of
/// freedom, Wilson-Hilferty beyond.
pub fn critical_value(dof: usize) -> f64 {
    match dof {
        0 => 0.0,
        1..=15 => CRITICAL[dof - 1],
        _ => {
            let k = dof as f64;
            let z = 3.090_232_306_167_813;
            let c = 2.0 / (9.0 * k);
            k * (1.0 - c + z * c.sqrt()).powi(3)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiSquareReport {
    pub arity: usize,
    pub counts: Vec<u64>,
    pub statistic: f64,
    pub dof: usize,
    pub critical: f64,
    pub pass: bool,
}

/// Goodness of fit of `counts` against the uniform distribution.
pub fn chi_square_uniform(counts: &[u64]) -> Result<ChiSquareReport> {
    let trials: u64 = counts.iter().sum();
    if counts.is_empty() || trials == 0 {
        return Err(Error::EmptyCounts);
    }
    let arity = counts.len();
    let expected = trials as f64 / arity as f64;
    let statistic = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum::<f64>();
    let dof = arity - 1;
    let critical = critical_value(dof);
    Ok(ChiSquareReport {
        arity,
        counts: counts.to_vec(),
        statistic,
        dof,
        critical,
        pass: dof == 0 || statistic < critical,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HomogeneityReport {
    pub rows: Vec<Vec<u64>>,
    pub statistic: f64,
    pub dof: usize,
    pub critical: f64,
    pub pass: bool,
}

/// Test that every row of a contingency table is drawn from the same
/// distribution. Columns that are empty in every row are dropped.
pub fn chi_square_homogeneity(rows: &[Vec<u64>]) -> Result<HomogeneityReport> {
    let width = rows.first().map(Vec::len).ok_or(Error::EmptyCounts)?;
    if rows.iter().any(|r| r.len() != width) {
        return Err(Error::DimMismatch("contingency rows of unequal length".into()));
    }
    let row_tot: Vec<f64> = rows.iter().map(|r| r.iter().sum::<u64>() as f64).collect();
    if row_tot.contains(&0.0) {
        return Err(Error::EmptyCounts);
    }
    let col_tot: Vec<f64> = (0..width).map(|j| rows.iter().map(|r| r[j]).sum::<u64>() as f64).collect();
    let total: f64 = row_tot.iter().sum();
    let live = col_tot.iter().filter(|&&c| c > 0.0).count();
    let mut statistic = 0.0;
    for (r, rt) in rows.iter().zip(&row_tot) {
        for (&c, ct) in r.iter().zip(&col_tot) {
            if *ct > 0.0 {
                let e = rt * ct / total;
                statistic += (c as f64 - e).powi(2) / e;
            }
        }
    }
    let dof = (rows.len() - 1) * live.saturating_sub(1);
    let critical = critical_value(dof);
    Ok(HomogeneityReport { rows: rows.to_vec(), statistic, dof, critical, pass: dof == 0 || statistic < critical })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_cases() {
        let r = chi_square_uniform(&[5000, 5000]).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!(r.pass);
        let r = chi_square_uniform(&[10000, 0]).unwrap();
        assert_eq!(r.statistic, 10000.0);
        assert!(!r.pass);
        assert_eq!(chi_square_uniform(&[]), Err(Error::EmptyCounts));
        assert_eq!(chi_square_uniform(&[0, 0]), Err(Error::EmptyCounts));
    }

    #[test]
    fn wilson_hilferty_continues_table() {
        // the approximation is within a percent of the table at its end
        assert!((critical_value(16) / 39.252 - 1.0).abs() < 0.01);
        assert!(critical_value(16) > critical_value(15));
    }

    #[test]
    fn homogeneity() {
        let same = chi_square_homogeneity(&[vec![500, 500], vec![490, 510], vec![505, 495]]).unwrap();
        assert!(same.pass);
        assert_eq!(same.dof, 2);
        let diff = chi_square_homogeneity(&[vec![500, 500], vec![900, 100]]).unwrap();
        assert!(!diff.pass);
        let sparse = chi_square_homogeneity(&[vec![10, 0, 10], vec![11, 0, 9]]).unwrap();
        assert_eq!(sparse.dof, 1);
    }
}
