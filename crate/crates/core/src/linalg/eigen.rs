//! Hermitian eigensolver (cyclic complex Jacobi) and the spectral routines
//! built on it: matrix exponentials and singular values.

use num_complex::Complex;

use super::operator::Operator;
use crate::error::{Error, Result};
use crate::scalar::{cis, cone, czero, Real, C};

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a hermitian operator.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T> {
    /// Eigenvalues in ascending order.
    pub values: Vec<T>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: Operator<T>,
}

pub fn hermitian_eigen<T: Real>(h: &Operator<T>) -> Result<HermitianEigen<T>> {
    let scale = h.frobenius_norm().max(T::one());
    let dev = h.hermitian_deviation();
    if dev > T::op_tol() * scale {
        return Err(Error::NonHermitianInput(dev.as_f64()));
    }
    let n = h.side();
    let mut a: Vec<C<T>> = h.entries().to_vec();
    // symmetrize away rounding noise before rotating
    for i in 0..n {
        a[i * n + i] = Complex::new(a[i * n + i].re, T::zero());
        for j in i + 1..n {
            let z = (a[i * n + j] + a[j * n + i].conj()) * T::lit(0.5);
            a[i * n + j] = z;
            a[j * n + i] = z.conj();
        }
    }
    let mut v = vec![czero(); n * n];
    for i in 0..n {
        v[i * n + i] = cone();
    }
    jacobi(&mut a, &mut v, n);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.partial_cmp(&a[j * n + j].re).unwrap());
    let values = order.iter().map(|&k| a[k * n + k].re).collect();
    let mut vecs = vec![czero(); n * n];
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vecs[row * n + new_col] = v[row * n + old_col];
        }
    }
    Ok(HermitianEigen { values, vectors: Operator::new(h.dims().to_vec(), vecs)? })
}

fn off_norm_sqr<T: Real>(a: &[C<T>], n: usize) -> T {
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s = s + a[i * n + j].norm_sqr();
            }
        }
    }
    s
}

fn jacobi<T: Real>(a: &mut [C<T>], v: &mut [C<T>], n: usize) {
    let total = a.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
    if total == T::zero() {
        return;
    }
    let eps = T::epsilon();
    for _ in 0..MAX_SWEEPS {
        if off_norm_sqr(a, n) <= eps * eps * total {
            return;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag <= eps * eps * total.sqrt() {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                // G = diag(1, e^{-i phi}) * [[c, s], [-s, c]] makes the pivot real, then zeroes it.
                let phase = apq / mag;
                let theta = (aqq - app) / (mag + mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                let g_pp = Complex::new(c, T::zero());
                let g_pq = Complex::new(s, T::zero());
                let g_qp = phase.conj() * (-s);
                let g_qq = phase.conj() * c;
                // A <- A G (columns p, q)
                for r in 0..n {
                    let (x, y) = (a[r * n + p], a[r * n + q]);
                    a[r * n + p] = x * g_pp + y * g_qp;
                    a[r * n + q] = x * g_pq + y * g_qq;
                }
                // A <- G^dagger A (rows p, q)
                for r in 0..n {
                    let (x, y) = (a[p * n + r], a[q * n + r]);
                    a[p * n + r] = g_pp.conj() * x + g_qp.conj() * y;
                    a[q * n + r] = g_pq.conj() * x + g_qq.conj() * y;
                }
                a[p * n + q] = czero();
                a[q * n + p] = czero();
                a[p * n + p] = Complex::new(a[p * n + p].re, T::zero());
                a[q * n + q] = Complex::new(a[q * n + q].re, T::zero());
                for r in 0..n {
                    let (x, y) = (v[r * n + p], v[r * n + q]);
                    v[r * n + p] = x * g_pp + y * g_qp;
                    v[r * n + q] = x * g_pq + y * g_qq;
                }
            }
        }
    }
}

/// Applies a real function to a hermitian operator through its spectrum.
pub fn hermitian_function<T: Real>(h: &Operator<T>, f: impl Fn(T) -> C<T>) -> Result<Operator<T>> {
    let eig = hermitian_eigen(h)?;
    let n = h.side();
    let w = &eig.vectors;
    let fvals: Vec<C<T>> = eig.values.iter().map(|&l| f(l)).collect();
    let mut mat = vec![czero(); n * n];
    for i in 0..n {
        for j in 0..n {
            mat[i * n + j] = (0..n).fold(czero(), |acc, k| acc + w.get(i, k) * fvals[k] * w.get(j, k).conj());
        }
    }
    Operator::new(h.dims().to_vec(), mat)
}

/// `e^{i t H}` for hermitian `H`.
pub fn expi_hermitian<T: Real>(h: &Operator<T>, t: T) -> Result<Operator<T>> {
    hermitian_function(h, |l| cis(l * t))
}

/// Singular values (descending) of the matrix whose columns are `columns`,
/// by one-sided Jacobi orthogonalization.
pub fn singular_values<T: Real>(columns: &[Vec<C<T>>]) -> Result<Vec<T>> {
    let Some(first) = columns.first() else {
        return Ok(Vec::new());
    };
    let len = first.len();
    if columns.iter().any(|c| c.len() != len) {
        return Err(Error::DimMismatch("columns of unequal length".into()));
    }
    let mut cols: Vec<Vec<C<T>>> = columns.to_vec();
    let k = cols.len();
    let eps = T::epsilon();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..k {
            for j in i + 1..k {
                let alpha = cols[i].iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
                let beta = cols[j].iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
                let gamma: C<T> = cols[i].iter().zip(&cols[j]).fold(czero(), |acc, (a, b)| acc + a.conj() * *b);
                let g = gamma.norm();
                if g <= eps * (alpha * beta).sqrt() || g == T::zero() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (g + g);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(j);
                for (u, w) in left[i].iter_mut().zip(right[0].iter_mut()) {
                    let wp = *w * phase.conj();
                    let nu = *u * c - wp * s;
                    let nw = *u * s + wp * c;
                    *u = nu;
                    *w = nw;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<T> = cols.iter().map(|c| c.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(sv)
}

/// Numerical rank: number of singular values above `tol`.
pub fn rank<T: Real>(columns: &[Vec<C<T>>], tol: T) -> Result<usize> {
    Ok(singular_values(columns)?.into_iter().filter(|&s| s > tol).count())
}
