//! Stators: hybrid objects `S = sum_j |j_A> (x) O_j` pairing Alice basis
//! states with operators on a remote system.

mod generator;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

pub use generator::{
    default_spectrum, power_index, power_tuples, subset_powers, Generator, GeneratorSpec, Involution, NLevel,
};

use crate::error::{Error, Result};
use crate::linalg::{Operator, StateVector};
use crate::scalar::{cone, czero, root_of_unity, Real, C};

/// Diagonal stator: term `j` is the remote operator paired with `|j_A>`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", try_from = "StatorRepr<T>")]
pub struct Stator<T> {
    alice_dim: usize,
    bob_dims: Vec<usize>,
    terms: Vec<Operator<T>>,
}

#[derive(Deserialize)]
#[serde(bound = "T: Real")]
struct StatorRepr<T> {
    alice_dim: usize,
    bob_dims: Vec<usize>,
    terms: Vec<Operator<T>>,
}

impl<T: Real> TryFrom<StatorRepr<T>> for Stator<T> {
    type Error = Error;

    fn try_from(r: StatorRepr<T>) -> Result<Self> {
        if r.alice_dim != r.terms.len() {
            return Err(Error::DimMismatch(format!("alice_dim {} with {} terms", r.alice_dim, r.terms.len())));
        }
        let s = Stator::new(r.terms)?;
        if s.bob_dims != r.bob_dims {
            return Err(Error::DimMismatch("bob_dims disagree with term dims".into()));
        }
        Ok(s)
    }
}

impl<T: Real> Stator<T> {
    pub fn new(terms: Vec<Operator<T>>) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::Malformed("a stator needs at least one term".into()))?;
        let bob_dims = first.dims().to_vec();
        if terms.iter().any(|t| t.dims() != bob_dims.as_slice()) {
            return Err(Error::DimMismatch("stator terms act on different spaces".into()));
        }
        Ok(Self { alice_dim: terms.len(), bob_dims, terms })
    }

    pub fn alice_dim(&self) -> usize {
        self.alice_dim
    }

    pub fn bob_dims(&self) -> &[usize] {
        &self.bob_dims
    }

    pub fn terms(&self) -> &[Operator<T>] {
        &self.terms
    }

    /// `S |psi>` over `(alice, bob...)`, normalized, together with the norm
    /// it had before normalization.
    pub fn apply(&self, psi: &StateVector<T>) -> Result<(StateVector<T>, T)> {
        if psi.dims() != self.bob_dims.as_slice() {
            return Err(Error::DimMismatch(format!("state dims {:?} vs stator {:?}", psi.dims(), self.bob_dims)));
        }
        let mut amps = Vec::with_capacity(self.alice_dim * psi.len());
        for term in &self.terms {
            amps.extend(term.apply_to(psi.amps())?);
        }
        let norm = amps.iter().fold(T::zero(), |acc, z: &C<T>| acc + z.norm_sqr()).sqrt();
        let mut dims = vec![self.alice_dim];
        dims.extend_from_slice(&self.bob_dims);
        Ok((StateVector::normalized(dims, amps)?, norm))
    }

    /// Frobenius norm of `op_a S - lam_b S`, with `S` viewed as the stack of its terms.
    pub fn eigenoperator_residual(&self, op_a: &Operator<T>, lam_b: &Operator<T>) -> Result<T> {
        if op_a.side() != self.alice_dim {
            return Err(Error::DimMismatch(format!(
                "Alice operator of side {} for alice_dim {}",
                op_a.side(),
                self.alice_dim
            )));
        }
        if lam_b.dims() != self.bob_dims.as_slice() {
            return Err(Error::DimMismatch(format!("remote operator dims {:?} vs {:?}", lam_b.dims(), self.bob_dims)));
        }
        let mut total = T::zero();
        for (i, term) in self.terms.iter().enumerate() {
            let mut lhs = Operator::zeros(self.bob_dims.clone());
            for (j, other) in self.terms.iter().enumerate() {
                let c = op_a.get(i, j);
                if c != czero() {
                    lhs = &lhs + &other.scale(c);
                }
            }
            let rhs = lam_b * term;
            total = total + (&lhs - &rhs).frobenius_norm().powi(2);
        }
        Ok(total.sqrt())
    }
}

/// `|0_A> (x) I + |1_A> (x) sigma_n`.
pub fn make_two_level_stator<T: Real>(g: &Involution<T>) -> Stator<T> {
    let op = g.operator();
    Stator::new(vec![Operator::identity(op.dims().to_vec()), op.clone()]).expect("terms share dims")
}

/// `sum_{m<n} |m_A> (x) U^m` for a unitary with `U^n = I`.
pub fn make_n_level_stator<T: Real>(n: usize, u: &Operator<T>) -> Result<Stator<T>> {
    if n < 2 {
        return Err(Error::InvalidGenerator("an n-level stator needs n >= 2".into()));
    }
    let dev = u.unitary_deviation();
    if dev > T::op_tol() {
        return Err(Error::NotUnitary(dev.as_f64()));
    }
    let dev = u.pow(n).max_abs_diff(&Operator::identity(u.dims().to_vec()));
    if dev > T::op_tol() {
        return Err(Error::NotRootOfUnity(dev.as_f64()));
    }
    let mut terms = Vec::with_capacity(n);
    let mut power = Operator::identity(u.dims().to_vec());
    for _ in 0..n {
        let next = &power * u;
        terms.push(power);
        power = next;
    }
    Stator::new(terms)
}

/// Tensor product of stators on separate remote systems; the Alice index is
/// the mixed-radix multi-index with the first part most significant.
pub fn product_stator<T: Real>(parts: &[Stator<T>]) -> Result<Stator<T>> {
    let (first, rest) = parts.split_first().ok_or_else(|| Error::Malformed("empty stator product".into()))?;
    let mut terms = first.terms.clone();
    for part in rest {
        terms = terms.iter().flat_map(|a| part.terms.iter().map(move |b| a.kron(b))).collect();
    }
    Stator::new(terms)
}

/// Cyclic shift `V |m> = |m - 1 mod n>`.
pub fn shift_operator<T: Real>(n: usize) -> Operator<T> {
    let mut v = Operator::zeros(vec![n]);
    for m in 0..n {
        v.set((m + n - 1) % n, m, cone());
    }
    v
}

/// Fourier coefficients `c_k` of the lift `A = sum_k c_k V^k`.
///
/// Each spectrum value is assigned to its residue class modulo `n`;
/// `c_k = (1/n) sum_r f(r) w^{-rk}` with `w = e^{2 pi i / n}` then satisfies
/// `sum_k c_k U^k = L_Z`. Unused residues get `f(r) = 0`.
pub fn lift_coefficients<T: Real>(spec: &NLevel<T>) -> Result<Vec<C<T>>> {
    let n = spec.n();
    let mut f: Vec<Option<i64>> = vec![None; n];
    for &l in spec.spectrum() {
        let r = l.rem_euclid(n as i64) as usize;
        match f[r] {
            Some(prev) if prev != l => return Err(Error::SpectrumAliased(prev, l, n)),
            _ => f[r] = Some(l),
        }
    }
    let inv_n = T::lit(1.0 / n as f64);
    Ok((0..n)
        .map(|k| {
            f.iter().enumerate().fold(czero(), |acc, (r, v)| {
                let val = T::lit(v.unwrap_or(0) as f64);
                acc + root_of_unity::<T>(-((r * k) as i64), n) * val
            }) * inv_n
        })
        .collect())
}

/// Hermitian Alice-side operator `A` with `A S = L_Z S` for the n-level
/// stator of `U = e^{2 pi i L_Z / n}`.
pub fn lift_generator<T: Real>(spec: &NLevel<T>) -> Result<Operator<T>> {
    let n = spec.n();
    let coeffs = lift_coefficients(spec)?;
    let v = shift_operator::<T>(n);
    let mut a = Operator::zeros(vec![n]);
    let mut power = Operator::identity(vec![n]);
    for c in coeffs {
        a = &a + &power.scale(c);
        power = &power * &v;
    }
    // exact hermitian part; the anti-hermitian remainder is rounding only
    let half = Complex::new(T::lit(0.5), T::zero());
    Ok((&a + &a.adjoint()).scale(half))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{entanglement_entropy, expi_hermitian, sigma_x, sigma_z, StateVector};

    #[test]
    fn two_level_terms() {
        let g = Involution::<f64>::named('z').unwrap();
        let s = make_two_level_stator(&g);
        assert_eq!(s.alice_dim(), 2);
        assert_eq!(s.terms()[0], Operator::identity(vec![2]));
        assert_eq!(s.terms()[1], sigma_z());
        let id = Involution::<f64>::new(Operator::identity(vec![2])).unwrap();
        assert_eq!(make_two_level_stator(&id).terms()[1], Operator::identity(vec![2]));
    }

    #[test]
    fn two_spin_involution_stator() {
        let xx = Involution::<f64>::new(sigma_x::<f64>().kron(&sigma_x())).unwrap();
        let s = make_two_level_stator(&xx);
        assert_eq!(s.bob_dims(), &[2, 2]);
        assert!(s.eigenoperator_residual(&sigma_x(), xx.operator()).unwrap() < 1e-12);
    }

    #[test]
    fn n_level_reduces_to_two_level() {
        let s2 = make_n_level_stator(2, &sigma_z::<f64>()).unwrap();
        assert_eq!(s2, make_two_level_stator(&Involution::named('z').unwrap()));
    }

    #[test]
    fn not_root_of_unity() {
        // U^3 = w I with w != 1
        let u = NLevel::<f64>::standard(3).unwrap().clock().scale(root_of_unity(1, 9));
        assert!(matches!(make_n_level_stator(3, &u), Err(Error::NotRootOfUnity(_))));
    }

    #[test]
    fn shift_operator_cycles() {
        let v3 = shift_operator::<f64>(3);
        let expected = Operator::<f64>::from_real(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]]).unwrap();
        assert_eq!(v3, expected);
        assert_eq!(shift_operator::<f64>(2), sigma_x());
        for n in 2..=8 {
            assert!(shift_operator::<f64>(n).pow(n).max_abs_diff(&Operator::identity(vec![n])) == 0.0);
        }
    }

    #[test]
    fn product_of_two_stators() {
        let sz = make_two_level_stator(&Involution::<f64>::named('z').unwrap());
        let sx = make_two_level_stator(&Involution::<f64>::named('x').unwrap());
        let p = product_stator(&[sz, sx]).unwrap();
        let i = Operator::<f64>::identity(vec![2]);
        let expected = [i.kron(&i), i.kron(&sigma_x()), sigma_z().kron(&i), sigma_z::<f64>().kron(&sigma_x())];
        assert_eq!(p.alice_dim(), 4);
        for (t, e) in p.terms().iter().zip(&expected) {
            assert_eq!(t, e);
        }
    }

    #[test]
    fn apply_entropy_zero_to_one() {
        let zero = StateVector::<f64>::basis(vec![2], 0).unwrap();
        let sx = make_two_level_stator(&Involution::<f64>::named('x').unwrap());
        let (joint, norm) = sx.apply(&zero).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = StateVector::new(vec![2, 2], [h, 0.0, 0.0, h].map(|x| Complex::new(x, 0.0)).to_vec()).unwrap();
        assert!((joint.inner(&expected).unwrap().norm() - 1.0).abs() < 1e-14);
        assert!((norm - 2f64.sqrt()).abs() < 1e-14);
        assert!((entanglement_entropy(&joint, &[0]).unwrap() - 1.0).abs() < 1e-12);
        let sz = make_two_level_stator(&Involution::<f64>::named('z').unwrap());
        let (joint, _) = sz.apply(&zero).unwrap();
        assert!(entanglement_entropy(&joint, &[0]).unwrap() < 1e-12);
        // S|+x> for the sigma_x stator is a product state
        let plus = StateVector::new(vec![2], vec![Complex::new(h, 0.0); 2]).unwrap();
        assert!(entanglement_entropy(&sx.apply(&plus).unwrap().0, &[0]).unwrap() < 1e-12);
    }

    #[test]
    fn eigenoperator_residuals() {
        let sz = make_two_level_stator(&Involution::<f64>::named('z').unwrap());
        assert!(sz.eigenoperator_residual(&sigma_x(), &sigma_z()).unwrap() < 1e-12);
        assert!(sz.eigenoperator_residual(&sigma_x(), &sigma_x()).unwrap() > 0.1);
        let nl = NLevel::<f64>::standard(5).unwrap();
        let s = make_n_level_stator(5, &nl.clock()).unwrap();
        assert!(s.eigenoperator_residual(&shift_operator(5), &nl.clock()).unwrap() < 1e-10);
        assert!(matches!(s.eigenoperator_residual(&sigma_x(), &nl.clock()), Err(Error::DimMismatch(_))));
    }

    #[test]
    fn lift_spin_one_matches_closed_form() {
        let nl = NLevel::<f64>::standard(3).unwrap();
        let a = lift_generator(&nl).unwrap();
        let v = shift_operator::<f64>(3);
        let denom = Complex::new(0.0, 2.0 * (2.0 * std::f64::consts::PI / 3.0).sin());
        let closed = (&v - &v.adjoint()).scale(Complex::new(1.0, 0.0) / denom);
        assert!(a.max_abs_diff(&closed) < 1e-12);
    }

    #[test]
    fn lift_two_level_and_zero() {
        let nl = NLevel::<f64>::with_spectrum(vec![1, -1]).unwrap();
        // 1 and -1 alias modulo 2
        assert!(matches!(lift_generator(&nl), Err(Error::SpectrumAliased(1, -1, 2))));
        let nl = NLevel::<f64>::with_spectrum(vec![0, 1]).unwrap();
        let s = make_n_level_stator(2, &nl.clock()).unwrap();
        let a = lift_generator(&nl).unwrap();
        assert!(s.eigenoperator_residual(&a, &nl.generator()).unwrap() < 1e-12);
        let zero = NLevel::<f64>::with_spectrum(vec![0; 4]).unwrap();
        assert!(lift_generator(&zero).unwrap().frobenius_norm() < 1e-15);
    }

    #[test]
    fn exp_image_of_lift() {
        let nl = NLevel::<f64>::standard(4).unwrap();
        let s = make_n_level_stator(4, &nl.clock()).unwrap();
        let a = lift_generator(&nl).unwrap();
        let ua = expi_hermitian(&a, 0.77).unwrap();
        let ub = expi_hermitian(&nl.generator(), 0.77).unwrap();
        assert!(s.eigenoperator_residual(&ua, &ub).unwrap() < 1e-10);
    }

    #[test]
    fn stator_json() {
        let s = make_two_level_stator(&Involution::<f64>::named('x').unwrap());
        let json = serde_json::to_value(&s).unwrap();
        assert_eq!(json["alice_dim"], 2);
        assert_eq!(json["bob_dims"], serde_json::json!([2]));
        assert_eq!(json["terms"].as_array().unwrap().len(), 2);
        let back: Stator<f64> = serde_json::from_value(json.clone()).unwrap();
        assert_eq!(back, s);
        let mut bad = json;
        bad["alice_dim"] = 3.into();
        assert!(serde_json::from_value::<Stator<f64>>(bad).is_err());
    }
}
