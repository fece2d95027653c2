use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use super::operator::{check_dims, product, Operator};
use crate::error::{Error, Result};
use crate::scalar::{cone, czero, Real, C};

/// Normalized pure state over a composite register space.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    dims: Vec<usize>,
    amps: Vec<C<T>>,
}

impl<T: Real> StateVector<T> {
    /// Wraps amplitudes that must already be normalized.
    pub fn new(dims: Vec<usize>, amps: Vec<C<T>>) -> Result<Self> {
        let state = Self::unchecked(dims, amps)?;
        let norm = state.norm();
        if (norm - T::one()).abs() > T::norm_tol() {
            return Err(Error::NotNormalized(norm.as_f64()));
        }
        Ok(state)
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(dims: Vec<usize>, amps: Vec<C<T>>) -> Result<Self> {
        let mut state = Self::unchecked(dims, amps)?;
        let norm = state.norm();
        if norm <= T::epsilon() {
            return Err(Error::Malformed("zero vector cannot be normalized".into()));
        }
        state.amps.iter_mut().for_each(|z| *z = *z / norm);
        Ok(state)
    }

    fn unchecked(dims: Vec<usize>, amps: Vec<C<T>>) -> Result<Self> {
        check_dims(&dims)?;
        let len = product(&dims);
        if amps.len() != len {
            return Err(Error::DimMismatch(format!("{} amplitudes for dims {dims:?}", amps.len())));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Malformed("non-finite amplitude".into()));
        }
        Ok(Self { dims, amps })
    }

    /// Computational basis state `|index>`.
    pub fn basis(dims: Vec<usize>, index: usize) -> Result<Self> {
        check_dims(&dims)?;
        let len = product(&dims);
        if index >= len {
            return Err(Error::DimMismatch(format!("basis index {index} out of range {len}")));
        }
        let mut amps = vec![czero(); len];
        amps[index] = cone();
        Ok(Self { dims, amps })
    }

    /// Haar-random state from normalized complex-normal amplitudes.
    pub fn random<R: Rng + ?Sized>(dims: Vec<usize>, rng: &mut R) -> Result<Self> {
        let len = product(&dims);
        let amps = (0..len)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex::new(T::lit(re), T::lit(im))
            })
            .collect();
        Self::normalized(dims, amps)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amps(&self) -> &[C<T>] {
        &self.amps
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm(&self) -> T {
        self.amps.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Self) -> Result<C<T>> {
        if self.dims != other.dims {
            return Err(Error::DimMismatch(format!("{:?} vs {:?}", self.dims, other.dims)));
        }
        Ok(self.amps.iter().zip(&other.amps).fold(czero(), |acc, (a, b)| acc + a.conj() * *b))
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let amps = self.amps.iter().flat_map(|&a| other.amps.iter().map(move |&b| a * b)).collect();
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { dims, amps }
    }

    /// Applies an operator over the full register space and renormalizes.
    pub fn apply(&self, op: &Operator<T>) -> Result<Self> {
        if op.side() != self.len() {
            return Err(Error::DimMismatch(format!("operator side {} for state of length {}", op.side(), self.len())));
        }
        Self::normalized(self.dims.clone(), op.apply_to(&self.amps)?)
    }

    /// Applies `op` to the registers at `targets` (in the operator's index order).
    pub fn apply_on(&self, op: &Operator<T>, targets: &[usize]) -> Result<Self> {
        let mut amps = self.amps.clone();
        apply_on_registers(&mut amps, &self.dims, op, targets)?;
        Self::normalized(self.dims.clone(), amps)
    }

    /// Reorders registers so that new register `k` is old register `order[k]`.
    pub fn permute(&self, order: &[usize]) -> Result<Self> {
        let r = self.dims.len();
        let mut seen = vec![false; r];
        if order.len() != r || order.iter().any(|&o| o >= r || std::mem::replace(&mut seen[o], true)) {
            return Err(Error::Malformed(format!("{order:?} is not a permutation of {r} registers")));
        }
        let old_strides = strides(&self.dims);
        let new_dims: Vec<usize> = order.iter().map(|&o| self.dims[o]).collect();
        let mut amps = vec![czero(); self.len()];
        let mut digits = vec![0usize; r];
        for (new_index, slot) in amps.iter_mut().enumerate() {
            let mut rem = new_index;
            for k in (0..r).rev() {
                digits[k] = rem % new_dims[k];
                rem /= new_dims[k];
            }
            let old_index: usize = order.iter().zip(&digits).map(|(&o, &d)| d * old_strides[o]).sum();
            *slot = self.amps[old_index];
        }
        Ok(Self { dims: new_dims, amps })
    }

    /// Contracts register `register` with the bra `<v|` and renormalizes,
    /// dropping the register from the state.
    pub fn contract(&self, register: usize, v: &[C<T>]) -> Result<Self> {
        let amps = project_register(&self.amps, &self.dims, register, v)?;
        let mut dims = self.dims.clone();
        dims.remove(register);
        if dims.is_empty() {
            dims.push(1);
        }
        Self::normalized(dims, amps)
    }
}

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// `<v|_register psi`, unnormalized, over the remaining registers.
pub(crate) fn project_register<T: Real>(
    amps: &[C<T>],
    dims: &[usize],
    register: usize,
    v: &[C<T>],
) -> Result<Vec<C<T>>> {
    if register >= dims.len() {
        return Err(Error::DimMismatch(format!("register {register} out of range")));
    }
    let d = dims[register];
    if v.len() != d {
        return Err(Error::DimMismatch(format!("bra of length {} for register of dim {d}", v.len())));
    }
    let st = strides(dims)[register];
    let outer = amps.len() / (d * st);
    let mut out = Vec::with_capacity(outer * st);
    for hi in 0..outer {
        for lo in 0..st {
            let base = hi * d * st + lo;
            out.push((0..d).fold(czero(), |acc, j| acc + v[j].conj() * amps[base + j * st]));
        }
    }
    Ok(out)
}

/// In-place application of `op` on a subset of registers of a raw amplitude vector.
pub(crate) fn apply_on_registers<T: Real>(
    amps: &mut [C<T>],
    dims: &[usize],
    op: &Operator<T>,
    targets: &[usize],
) -> Result<()> {
    if amps.len() != product(dims) {
        return Err(Error::DimMismatch("amplitudes do not match dims".into()));
    }
    let mut seen = vec![false; dims.len()];
    for &t in targets {
        if t >= dims.len() || std::mem::replace(&mut seen[t], true) {
            return Err(Error::DimMismatch(format!("invalid target registers {targets:?}")));
        }
    }
    let sub: Vec<usize> = targets.iter().map(|&t| dims[t]).collect();
    if targets.is_empty() || product(&sub) != op.side() {
        return Err(Error::DimMismatch(format!("operator of side {} on registers of dims {sub:?}", op.side())));
    }
    let st = strides(dims);
    let sub_side = op.side();
    // offset of each sub-basis index relative to a base index with zero target digits
    let offsets: Vec<usize> = (0..sub_side)
        .map(|j| {
            let mut rem = j;
            let mut off = 0;
            for k in (0..targets.len()).rev() {
                off += (rem % sub[k]) * st[targets[k]];
                rem /= sub[k];
            }
            off
        })
        .collect();
    let mut gathered = vec![czero(); sub_side];
    for base in 0..amps.len() {
        if targets.iter().any(|&t| !(base / st[t]).is_multiple_of(dims[t])) {
            continue;
        }
        for (g, &off) in gathered.iter_mut().zip(&offsets) {
            *g = amps[base + off];
        }
        let out = op.apply_to(&gathered)?;
        for (z, &off) in out.into_iter().zip(&offsets) {
            amps[base + off] = z;
        }
    }
    Ok(())
}

/// `|<a|b>|`, which is 1 exactly when the states agree up to a global phase.
pub fn fidelity_up_to_phase<T: Real>(a: &StateVector<T>, b: &StateVector<T>) -> Result<T> {
    Ok(a.inner(b)?.norm().min(T::one()))
}
