//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real scalar type the simulator is generic over (`f32` or `f64`).
///
/// The tolerance hooks let every predicate scale with the precision of the
/// underlying float; for `f64` they are the values the protocols are
/// specified against.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Tolerance for unitary, hermitian and involution predicates.
    fn op_tol() -> Self;
    /// Tolerance for state normalization.
    fn norm_tol() -> Self;

    /// Converts an `f64` literal into this scalar.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Real for f64 {
    fn op_tol() -> Self {
        1e-10
    }
    fn norm_tol() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn op_tol() -> Self {
        1e-4
    }
    fn norm_tol() -> Self {
        1e-5
    }
}

/// Complex scalar over a [`Real`].
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn czero<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn cone<T: Real>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

#[inline]
pub(crate) fn creal<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// `e^{i theta}`
#[inline]
pub(crate) fn cis<T: Real>(theta: T) -> C<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// `e^{2 pi i k / n}` with the exponent reduced modulo `n` first.
pub(crate) fn root_of_unity<T: Real>(k: i64, n: usize) -> C<T> {
    let r = k.rem_euclid(n as i64);
    cis(T::lit(2.0 * std::f64::consts::PI * r as f64 / n as f64))
}
