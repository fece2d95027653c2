//! JSON layout: `{"dims":[..], "amps":[[re,im],..]}` for states and
//! `{"dims":[..], "mat":[[[re,im],..],..]}` (row-major) for operators.

use num_complex::Complex;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Operator, StateVector};
use crate::scalar::Real;

#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Real")]
struct StateRepr<T> {
    dims: Vec<usize>,
    amps: Vec<[T; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Real")]
struct OperatorRepr<T> {
    dims: Vec<usize>,
    mat: Vec<Vec<[T; 2]>>,
}

impl<T: Real> Serialize for StateVector<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        StateRepr { dims: self.dims().to_vec(), amps: self.amps().iter().map(|z| [z.re, z.im]).collect() }.serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for StateVector<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = StateRepr::<T>::deserialize(d)?;
        let amps = repr.amps.into_iter().map(|[re, im]| Complex::new(re, im)).collect();
        StateVector::new(repr.dims, amps).map_err(D::Error::custom)
    }
}

impl<T: Real> Serialize for Operator<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mat = self.entries().chunks(self.side()).map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect();
        OperatorRepr { dims: self.dims().to_vec(), mat }.serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for Operator<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = OperatorRepr::<T>::deserialize(d)?;
        let rows = repr.mat.into_iter().map(|r| r.into_iter().map(|[re, im]| Complex::new(re, im)).collect()).collect();
        Operator::from_rows(repr.dims, rows).map_err(D::Error::custom)
    }
}
