use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cone, creal, czero, Real, C};

/// Dense square complex matrix over a composite register space.
///
/// Rows and columns follow the register ordering of `dims`, with the first
/// register as the most significant digit of the flattened index.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator<T> {
    dims: Vec<usize>,
    side: usize,
    mat: Vec<C<T>>,
}

pub(crate) fn product(dims: &[usize]) -> usize {
    dims.iter().product()
}

pub(crate) fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::Malformed(format!("register dims {dims:?} must be nonempty and positive")));
    }
    Ok(())
}

impl<T: Real> Operator<T> {
    /// Builds an operator from a row-major entry vector.
    pub fn new(dims: Vec<usize>, mat: Vec<C<T>>) -> Result<Self> {
        check_dims(&dims)?;
        let side = product(&dims);
        if mat.len() != side * side {
            return Err(Error::DimMismatch(format!("{} entries for a {side}x{side} operator", mat.len())));
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Malformed("non-finite operator entry".into()));
        }
        Ok(Self { dims, side, mat })
    }

    pub fn from_rows(dims: Vec<usize>, rows: Vec<Vec<C<T>>>) -> Result<Self> {
        let side = product(&dims);
        if rows.len() != side || rows.iter().any(|r| r.len() != side) {
            return Err(Error::DimMismatch(format!("expected {side} rows of length {side}")));
        }
        Self::new(dims, rows.into_iter().flatten().collect())
    }

    /// Real-valued convenience constructor for a single register.
    pub fn from_real(rows: &[&[f64]]) -> Result<Self> {
        let side = rows.len();
        let mat = rows.iter().flat_map(|r| r.iter().map(|&x| creal(T::lit(x)))).collect();
        Self::new(vec![side], mat)
    }

    pub fn zeros(dims: Vec<usize>) -> Self {
        let side = product(&dims);
        Self { dims, side, mat: vec![czero(); side * side] }
    }

    pub fn identity(dims: Vec<usize>) -> Self {
        let mut op = Self::zeros(dims);
        for i in 0..op.side {
            op.mat[i * op.side + i] = cone();
        }
        op
    }

    pub fn diagonal(dims: Vec<usize>, diag: &[C<T>]) -> Result<Self> {
        let mut op = Self::zeros(dims);
        if diag.len() != op.side {
            return Err(Error::DimMismatch(format!("{} diagonal entries for side {}", diag.len(), op.side)));
        }
        for (i, &z) in diag.iter().enumerate() {
            op.mat[i * op.side + i] = z;
        }
        Ok(op)
    }

    /// `|col><row|`-style projector onto a (not necessarily normalized) vector.
    pub fn outer(dims: Vec<usize>, ket: &[C<T>], bra: &[C<T>]) -> Result<Self> {
        let side = product(&dims);
        if ket.len() != side || bra.len() != side {
            return Err(Error::DimMismatch("outer product vectors do not match dims".into()));
        }
        let mat = ket.iter().flat_map(|&k| bra.iter().map(move |&b| k * b.conj())).collect();
        Self::new(dims, mat)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn side(&self) -> usize {
        self.side
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[C<T>] {
        &self.mat
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C<T> {
        self.mat[row * self.side + col]
    }

    #[inline]
    pub(crate) fn set(&mut self, row: usize, col: usize, z: C<T>) {
        self.mat[row * self.side + col] = z;
    }

    /// Same matrix, relabelled with different register dims of equal total size.
    pub fn with_dims(mut self, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims)?;
        if product(&dims) != self.side {
            return Err(Error::DimMismatch(format!("dims {dims:?} do not match side {}", self.side)));
        }
        self.dims = dims;
        Ok(self)
    }

    pub fn adjoint(&self) -> Self {
        let n = self.side;
        let mut mat = vec![czero(); n * n];
        for i in 0..n {
            for j in 0..n {
                mat[j * n + i] = self.mat[i * n + j].conj();
            }
        }
        Self { dims: self.dims.clone(), side: n, mat }
    }

    pub fn scale(&self, z: C<T>) -> Self {
        Self { dims: self.dims.clone(), side: self.side, mat: self.mat.iter().map(|&x| x * z).collect() }
    }

    pub fn scale_real(&self, x: T) -> Self {
        self.scale(Complex::new(x, T::zero()))
    }

    pub fn trace(&self) -> C<T> {
        (0..self.side).fold(czero(), |acc, i| acc + self.get(i, i))
    }

    pub fn frobenius_norm(&self) -> T {
        self.mat.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.side != rhs.side {
            return Err(Error::DimMismatch(format!("cannot multiply side {} by side {}", self.side, rhs.side)));
        }
        let n = self.side;
        let mut mat = vec![czero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.mat[i * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let row = &rhs.mat[k * n..(k + 1) * n];
                let out = &mut mat[i * n..(i + 1) * n];
                for (o, &b) in out.iter_mut().zip(row) {
                    *o = *o + a * b;
                }
            }
        }
        Ok(Self { dims: self.dims.clone(), side: n, mat })
    }

    /// Non-negative integer power.
    pub fn pow(&self, k: usize) -> Self {
        let mut result = Self::identity(self.dims.clone());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Kronecker product; `self` supplies the most significant index.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (n, m) = (self.side, rhs.side);
        let side = n * m;
        let mut mat = vec![czero(); side * side];
        for i in 0..n {
            for j in 0..n {
                let a = self.mat[i * n + j];
                for k in 0..m {
                    for l in 0..m {
                        mat[(i * m + k) * side + j * m + l] = a * rhs.mat[k * m + l];
                    }
                }
            }
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&rhs.dims);
        Self { dims, side, mat }
    }

    /// Matrix-vector product on a raw amplitude slice.
    pub fn apply_to(&self, v: &[C<T>]) -> Result<Vec<C<T>>> {
        if v.len() != self.side {
            return Err(Error::DimMismatch(format!("vector of length {} for side {}", v.len(), self.side)));
        }
        let n = self.side;
        Ok((0..n)
            .map(|i| self.mat[i * n..(i + 1) * n].iter().zip(v).fold(czero(), |acc, (&a, &b)| acc + a * b))
            .collect())
    }

    /// Largest entrywise deviation from `M = M^dagger`.
    pub fn hermitian_deviation(&self) -> T {
        let n = self.side;
        let mut dev = T::zero();
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    /// Largest entrywise deviation of `M^dagger M` from the identity.
    pub fn unitary_deviation(&self) -> T {
        max_identity_deviation(&(&self.adjoint() * self))
    }

    /// Largest entrywise deviation of `M^2` from the identity.
    pub fn involution_deviation(&self) -> T {
        max_identity_deviation(&(self * self))
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_deviation() <= T::op_tol()
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary_deviation() <= T::op_tol()
    }

    pub fn is_involution(&self) -> bool {
        self.involution_deviation() <= T::op_tol()
    }

    /// Largest entrywise distance to another operator of the same side.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.side, other.side, "operator side mismatch");
        self.mat.iter().zip(&other.mat).fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).norm()))
    }

    /// Lifts this operator to act on `targets` (register positions, in the
    /// operator's own index order) of a register space with `full_dims`.
    pub fn embed(&self, targets: &[usize], full_dims: &[usize]) -> Result<Self> {
        let full = product(full_dims);
        let mut mat = vec![czero(); full * full];
        let mut column = vec![czero(); full];
        for col in 0..full {
            column.iter_mut().for_each(|z| *z = czero());
            column[col] = cone();
            super::state::apply_on_registers(&mut column, full_dims, self, targets)?;
            for (row, z) in column.iter().enumerate() {
                mat[row * full + col] = *z;
            }
        }
        Self::new(full_dims.to_vec(), mat)
    }

    pub fn map_entries(&self, f: impl Fn(C<T>) -> C<T>) -> Self {
        Self { dims: self.dims.clone(), side: self.side, mat: self.mat.iter().map(|&z| f(z)).collect() }
    }
}

fn max_identity_deviation<T: Real>(m: &Operator<T>) -> T {
    let n = m.side;
    let mut dev = T::zero();
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { cone() } else { czero() };
            dev = dev.max((m.get(i, j) - target).norm());
        }
    }
    dev
}

impl<'a, T: Real> Mul<&'a Operator<T>> for &'a Operator<T> {
    type Output = Operator<T>;

    fn mul(self, rhs: &'a Operator<T>) -> Operator<T> {
        self.matmul(rhs).expect("operator side mismatch")
    }
}

impl<'a, T: Real> Add<&'a Operator<T>> for &'a Operator<T> {
    type Output = Operator<T>;

    fn add(self, rhs: &'a Operator<T>) -> Operator<T> {
        assert_eq!(self.side, rhs.side, "operator side mismatch");
        Operator {
            dims: self.dims.clone(),
            side: self.side,
            mat: self.mat.iter().zip(&rhs.mat).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl<'a, T: Real> Sub<&'a Operator<T>> for &'a Operator<T> {
    type Output = Operator<T>;

    fn sub(self, rhs: &'a Operator<T>) -> Operator<T> {
        assert_eq!(self.side, rhs.side, "operator side mismatch");
        Operator {
            dims: self.dims.clone(),
            side: self.side,
            mat: self.mat.iter().zip(&rhs.mat).map(|(a, b)| *a - *b).collect(),
        }
    }
}

/// Pauli X.
pub fn sigma_x<T: Real>() -> Operator<T> {
    Operator::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
}

/// Pauli Y.
pub fn sigma_y<T: Real>() -> Operator<T> {
    let i = Complex::new(T::zero(), T::one());
    let minus_i = Complex::new(T::zero(), -T::one());
    Operator::new(vec![2], vec![czero(), minus_i, i, czero()]).unwrap()
}

/// Pauli Z.
pub fn sigma_z<T: Real>() -> Operator<T> {
    Operator::from_real(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap()
}

/// `n . sigma` for a unit axis `n`.
pub fn sigma_axis<T: Real>(axis: [T; 3]) -> Operator<T> {
    let [x, y, z] = axis;
    let sx = sigma_x::<T>().scale_real(x);
    let sy = sigma_y::<T>().scale_real(y);
    let sz = sigma_z::<T>().scale_real(z);
    &(&sx + &sy) + &sz
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let x = sigma_x::<f64>();
        let y = sigma_y::<f64>();
        let z = sigma_z::<f64>();
        let i = Complex::new(0.0, 1.0);
        assert!((&x * &y).max_abs_diff(&z.scale(i)) < 1e-15);
        for p in [&x, &y, &z] {
            assert!(p.is_hermitian() && p.is_unitary() && p.is_involution());
        }
    }

    #[test]
    fn kron_block_structure() {
        // sigma_z (x) sigma_x = [[sigma_x, 0], [0, -sigma_x]]
        let k = sigma_z::<f64>().kron(&sigma_x());
        let expected = Operator::<f64>::from_real(&[
            &[0.0, 1.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, -1.0],
            &[0.0, 0.0, -1.0, 0.0],
        ])
        .unwrap();
        assert_eq!(k.dims(), &[2, 2]);
        assert_eq!(k.max_abs_diff(&expected), 0.0);
    }

    #[test]
    fn pow_matches_repeated_product() {
        let m = sigma_axis::<f64>([0.6, 0.0, 0.8]).scale(Complex::new(0.3, 0.1));
        let direct = &(&(&m * &m) * &m) * &m;
        assert!(m.pow(4).max_abs_diff(&direct) < 1e-15);
        assert_eq!(m.pow(0), Operator::identity(vec![2]));
    }

    #[test]
    fn embed_on_second_register() {
        let x = sigma_x::<f64>();
        let e = x.embed(&[1], &[2, 2]).unwrap();
        let expected = Operator::identity(vec![2]).kron(&x);
        assert_eq!(e.max_abs_diff(&expected), 0.0);
        // reversed two-register target order swaps the kron factors
        let zx = sigma_z::<f64>().kron(&x);
        let swapped = zx.embed(&[1, 0], &[2, 2]).unwrap();
        assert_eq!(swapped.max_abs_diff(&x.kron(&sigma_z())), 0.0);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(Operator::<f64>::new(vec![2], vec![cone(); 3]), Err(Error::DimMismatch(_))));
        assert!(Operator::<f64>::new(vec![], vec![]).is_err());
    }
}
