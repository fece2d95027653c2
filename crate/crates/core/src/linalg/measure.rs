use rand::Rng;

use super::state::{project_register, StateVector};
use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Forced outcomes below this Born probability are refused.
pub const MIN_FORCED_PROBABILITY: f64 = 1e-14;

/// Where a measurement outcome comes from.
pub enum OutcomeSource<'a, R: ?Sized> {
    Sample(&'a mut R),
    /// Select this outcome; its true probability is still reported.
    Forced(usize),
}

#[derive(Clone, Debug)]
pub struct Measurement<T> {
    pub outcome: usize,
    pub prob: T,
    /// Post-measurement state with the measured register left in its basis vector.
    pub collapsed: StateVector<T>,
    /// Post-measurement state of the remaining registers.
    pub reduced: StateVector<T>,
}

fn check_basis<T: Real>(basis: &[StateVector<T>], dim: usize) -> Result<()> {
    if basis.len() != dim || basis.iter().any(|b| b.dims() != [dim]) {
        return Err(Error::NonOrthonormalBasis(f64::INFINITY));
    }
    let mut dev = T::zero();
    for (i, bi) in basis.iter().enumerate() {
        for (j, bj) in basis.iter().enumerate() {
            let g = bi.inner(bj)?;
            let target = if i == j { T::one() } else { T::zero() };
            dev = dev.max((g - C::new(target, T::zero())).norm());
        }
    }
    if dev > T::op_tol() {
        return Err(Error::NonOrthonormalBasis(dev.as_f64()));
    }
    Ok(())
}

/// Born probabilities of measuring `register` in `basis`.
pub fn outcome_probabilities<T: Real>(
    state: &StateVector<T>,
    register: usize,
    basis: &[StateVector<T>],
) -> Result<Vec<T>> {
    let dim =
        *state.dims().get(register).ok_or_else(|| Error::DimMismatch(format!("register {register} out of range")))?;
    check_basis(basis, dim)?;
    basis
        .iter()
        .map(|b| {
            let proj = project_register(state.amps(), state.dims(), register, b.amps())?;
            Ok(proj.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()))
        })
        .collect()
}

/// Projective measurement of one register in an orthonormal basis.
pub fn measure_projective<T: Real, R: Rng + ?Sized>(
    state: &StateVector<T>,
    register: usize,
    basis: &[StateVector<T>],
    source: OutcomeSource<'_, R>,
) -> Result<Measurement<T>> {
    let probs = outcome_probabilities(state, register, basis)?;
    let outcome = match source {
        OutcomeSource::Forced(k) => {
            let p = *probs.get(k).ok_or(Error::ImpossibleForcedOutcome { outcome: k, prob: 0.0 })?;
            if p.as_f64() < MIN_FORCED_PROBABILITY {
                return Err(Error::ImpossibleForcedOutcome { outcome: k, prob: p.as_f64() });
            }
            k
        }
        OutcomeSource::Sample(rng) => {
            let total: f64 = probs.iter().map(|p| p.as_f64()).sum();
            let u: f64 = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = None;
            for (k, p) in probs.iter().enumerate() {
                let p = p.as_f64();
                acc += p;
                if p > 0.0 && u < acc {
                    chosen = Some(k);
                    break;
                }
            }
            // rounding can leave u at the very top of the range
            chosen.unwrap_or_else(|| probs.iter().rposition(|p| p.as_f64() > 0.0).unwrap_or(0))
        }
    };
    let b = &basis[outcome];
    let reduced = state.contract(register, b.amps())?;
    let mut dims = state.dims().to_vec();
    dims.remove(register);
    let collapsed = if dims.is_empty() {
        b.clone()
    } else {
        // re-insert the measured register at its original position
        let joint = b.tensor(&reduced);
        let mut order: Vec<usize> = (1..=dims.len()).collect();
        order.insert(register, 0);
        joint.permute(&order)?
    };
    Ok(Measurement { outcome, prob: probs[outcome], collapsed, reduced })
}

/// Computational basis `|0>, ..., |n-1>`.
pub fn computational_basis<T: Real>(n: usize) -> Vec<StateVector<T>> {
    (0..n).map(|k| StateVector::basis(vec![n], k).unwrap()).collect()
}

/// Discrete Fourier basis `|k'> = n^{-1/2} sum_m e^{2 pi i k m / n} |m>`.
pub fn fourier_basis<T: Real>(n: usize) -> Vec<StateVector<T>> {
    let norm = T::lit(1.0 / (n as f64).sqrt());
    (0..n)
        .map(|k| {
            let amps = (0..n).map(|m| crate::scalar::root_of_unity::<T>((k * m) as i64, n) * norm).collect();
            StateVector::new(vec![n], amps).unwrap()
        })
        .collect()
}

/// Eigenbasis of sigma_x: `|+>, |->`.
pub fn sigma_x_basis<T: Real>() -> Vec<StateVector<T>> {
    let h = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    let plus = vec![C::new(h, T::zero()), C::new(h, T::zero())];
    let minus = vec![C::new(h, T::zero()), C::new(-h, T::zero())];
    vec![StateVector::new(vec![2], plus).unwrap(), StateVector::new(vec![2], minus).unwrap()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{fidelity_up_to_phase, Operator};
    use num_complex::Complex;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type Src<'a> = OutcomeSource<'a, ChaCha8Rng>;

    #[test]
    fn eigenstate_gives_certain_outcome() {
        let zero = StateVector::<f64>::basis(vec![2], 0).unwrap();
        let m = measure_projective(&zero, 0, &computational_basis(2), Src::Forced(0)).unwrap();
        assert_eq!((m.outcome, m.prob), (0, 1.0));
        assert!(matches!(
            measure_projective(&zero, 0, &computational_basis(2), Src::Forced(1)),
            Err(Error::ImpossibleForcedOutcome { outcome: 1, .. })
        ));
    }

    #[test]
    fn zero_in_sigma_x_basis_is_unbiased() {
        let zero = StateVector::<f64>::basis(vec![2], 0).unwrap();
        let probs = outcome_probabilities(&zero, 0, &sigma_x_basis()).unwrap();
        assert!((probs[0] - 0.5).abs() < 1e-15 && (probs[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn fourier_basis_n2_is_sigma_x_basis() {
        let f = fourier_basis::<f64>(2);
        let x = sigma_x_basis::<f64>();
        for (a, b) in f.iter().zip(&x) {
            assert!((fidelity_up_to_phase(a, b).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn non_orthonormal_basis_rejected() {
        let zero = StateVector::<f64>::basis(vec![2], 0).unwrap();
        let bad = vec![zero.clone(), sigma_x_basis()[0].clone()];
        assert!(matches!(outcome_probabilities(&zero, 0, &bad), Err(Error::NonOrthonormalBasis(_))));
        assert!(matches!(
            outcome_probabilities(&zero, 0, std::slice::from_ref(&zero)),
            Err(Error::NonOrthonormalBasis(_))
        ));
    }

    #[test]
    fn controlled_sigma_branches_are_half() {
        // (|0_a 0_b> + |1_a 1_b>)/sqrt2 (x) psi after U_bB = |0><0| I + |1><1| sigma_x, then b in the x basis
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let psi = StateVector::<f64>::random(vec![2], &mut rng).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = StateVector::new(
            vec![2, 2],
            vec![Complex::new(h, 0.0), Complex::new(0.0, 0.0), Complex::new(0.0, 0.0), Complex::new(h, 0.0)],
        )
        .unwrap();
        let p0 = Operator::<f64>::from_real(&[&[1.0, 0.0], &[0.0, 0.0]]).unwrap();
        let p1 = Operator::<f64>::from_real(&[&[0.0, 0.0], &[0.0, 1.0]]).unwrap();
        let cu = &p0.kron(&Operator::identity(vec![2])) + &p1.kron(&crate::linalg::sigma_x());
        let state = bell.tensor(&psi).apply_on(&cu, &[1, 2]).unwrap();
        let mut total = 0.0;
        for k in 0..2 {
            let m = measure_projective(&state, 1, &sigma_x_basis(), Src::Forced(k)).unwrap();
            assert!((m.prob - 0.5).abs() < 1e-14);
            assert_eq!(m.collapsed.dims(), &[2, 2, 2]);
            assert_eq!(m.reduced.dims(), &[2, 2]);
            total += m.prob;
        }
        assert!((total - 1.0).abs() < 1e-12);
    }
}
