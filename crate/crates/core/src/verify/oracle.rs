use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{Operator, StateVector};
use crate::scalar::{Real, C};
use crate::stator::{Generator, GeneratorSpec};

/// Matrix exponential by scaling and squaring of the Taylor series.
///
/// Deliberately shares nothing with the eigen-decomposition path the
/// protocols use.
pub fn expm<T: Real>(m: &Operator<T>) -> Operator<T> {
    let norm = m.frobenius_norm();
    let mut squarings = 0;
    let mut scale = T::one();
    while norm * scale > T::lit(0.5) {
        scale = scale * T::lit(0.5);
        squarings += 1;
    }
    let a = m.scale_real(scale);
    let id = Operator::identity(m.dims().to_vec());
    let mut sum = id.clone();
    let mut term = id;
    for k in 1..40 {
        term = (&term * &a).scale_real(T::one() / T::lit(k as f64));
        sum = &sum + &term;
        if term.frobenius_norm() < T::epsilon() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

fn remote_factor<T: Real>(part: &Generator<T>) -> Result<Operator<T>> {
    match part {
        Generator::Involution(g) => Ok(g.operator().clone()),
        Generator::NLevel(nl) => Ok(nl.generator()),
        Generator::Product(_) => Err(Error::InvalidGenerator("nested products are not supported".into())),
    }
}

/// `exp(i sum_k alpha_k (x)_i G_i^{k_i})` over the concatenated system dims.
pub fn target_unitary<T: Real>(spec: &GeneratorSpec<T>) -> Result<Operator<T>> {
    let factors: Vec<Operator<T>> = spec.generator.parts().iter().map(remote_factor).collect::<Result<_>>()?;
    let dims = spec.generator.system_dims();
    let mut h = Operator::zeros(dims.clone());
    for (powers, angle) in spec.terms() {
        let mut term: Option<Operator<T>> = None;
        for (f, &k) in factors.iter().zip(&powers) {
            let p = f.pow(k);
            term = Some(match term {
                None => p,
                Some(t) => t.kron(&p),
            });
        }
        let term = term.expect("at least one party").with_dims(dims.clone())?;
        h = &h + &term.scale_real(angle);
    }
    let i: C<T> = Complex::new(T::zero(), T::one());
    Ok(expm(&h.scale(i)))
}

/// Applies the target operator of `spec` to `psi` directly.
pub fn oracle_direct<T: Real>(spec: &GeneratorSpec<T>, psi: &StateVector<T>) -> Result<StateVector<T>> {
    let dims = spec.generator.system_dims();
    if psi.dims() != dims.as_slice() {
        return Err(Error::DimMismatch(format!("state dims {:?} vs generator dims {dims:?}", psi.dims())));
    }
    psi.apply(&target_unitary(spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expi_hermitian, fidelity_up_to_phase, sigma_x, sigma_z};
    use crate::stator::{Involution, NLevel};

    #[test]
    fn expm_matches_eigen_path() {
        let h =
            &sigma_x::<f64>().kron(&sigma_z()) + &sigma_z::<f64>().kron(&Operator::identity(vec![2])).scale_real(0.3);
        let i = Complex::new(0.0, 1.0);
        let a = expm(&h.scale(i * 2.7));
        let b = expi_hermitian(&h, 2.7).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn full_turn_is_global_phase() {
        let spec = GeneratorSpec::involution(Involution::named('z').unwrap(), std::f64::consts::PI).unwrap();
        let psi = StateVector::normalized(vec![2], vec![Complex::new(0.6, 0.0), Complex::new(0.0, 0.8)]).unwrap();
        let out = oracle_direct(&spec, &psi).unwrap();
        assert!((fidelity_up_to_phase(&out, &psi).unwrap() - 1.0).abs() < 1e-12);
        assert!((out.amps()[0] + psi.amps()[0]).norm() < 1e-12);
    }

    #[test]
    fn spin_one_closed_form() {
        let theta = 0.83_f64;
        let spec = GeneratorSpec::n_level(NLevel::standard(3).unwrap(), vec![theta, 0.0]).unwrap();
        let u = target_unitary(&spec).unwrap();
        let l = NLevel::<f64>::standard(3).unwrap().generator();
        let id = Operator::identity(vec![3]);
        let closed = &(&id + &l.scale(Complex::new(0.0, theta.sin()))) + &(&l * &l).scale_real(theta.cos() - 1.0);
        assert!(u.max_abs_diff(&closed) < 1e-12);
    }

    #[test]
    fn rejects_wrong_state() {
        let spec = GeneratorSpec::involution(Involution::named('x').unwrap(), 0.1).unwrap();
        let psi = StateVector::basis(vec![3], 0).unwrap();
        assert!(matches!(oracle_direct(&spec, &psi), Err(Error::DimMismatch(_))));
    }
}
