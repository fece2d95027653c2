//! Descriptions of the operation a remote protocol should realize.

use crate::error::{Error, Result};
use crate::linalg::{sigma_axis, sigma_x, sigma_y, sigma_z, Operator};
use crate::scalar::{creal, root_of_unity, Real, C};

/// A hermitian involution `M = M^dagger`, `M^2 = I` on the remote system,
/// e.g. `n . sigma` or a product of such operators on several spins.
#[derive(Clone, Debug, PartialEq)]
pub struct Involution<T> {
    op: Operator<T>,
}

impl<T: Real> Involution<T> {
    pub fn new(op: Operator<T>) -> Result<Self> {
        let dev = op.hermitian_deviation().max(op.involution_deviation());
        if dev > T::op_tol() {
            return Err(Error::NotInvolution(dev.as_f64()));
        }
        Ok(Self { op })
    }

    /// `n . sigma` for a nonzero axis (normalized here).
    pub fn from_axis(axis: [T; 3]) -> Result<Self> {
        let norm = axis.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt();
        if !norm.is_finite() || norm <= T::epsilon() {
            return Err(Error::InvalidGenerator("axis must be a nonzero finite 3-vector".into()));
        }
        Self::new(sigma_axis(axis.map(|x| x / norm)))
    }

    /// Pauli operator for a named axis `x`, `y` or `z`.
    pub fn named(axis: char) -> Result<Self> {
        let op = match axis.to_ascii_lowercase() {
            'x' => sigma_x(),
            'y' => sigma_y(),
            'z' => sigma_z(),
            other => return Err(Error::InvalidGenerator(format!("unknown axis '{other}'"))),
        };
        Ok(Self { op })
    }

    pub fn operator(&self) -> &Operator<T> {
        &self.op
    }

    pub fn dims(&self) -> &[usize] {
        self.op.dims()
    }

    /// Tensor product of involutions on separate systems is an involution.
    pub fn tensor(&self, other: &Self) -> Self {
        Self { op: self.op.kron(&other.op) }
    }
}

/// Spectrum used when none is supplied: `(j, j-1, ..., -j)` for odd `n`,
/// `(0, 1, ..., n-1)` for even `n`.
pub fn default_spectrum(n: usize) -> Vec<i64> {
    if n % 2 == 1 {
        let j = (n as i64 - 1) / 2;
        (0..n as i64).map(|k| j - k).collect()
    } else {
        (0..n as i64).collect()
    }
}

/// An n-level generator `L_Z = W diag(spectrum) W^dagger` with integer
/// spectrum, so that the clock `U = e^{2 pi i L_Z / n}` satisfies `U^n = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct NLevel<T> {
    spectrum: Vec<i64>,
    eigenbasis: Operator<T>,
}

impl<T: Real> NLevel<T> {
    /// Accepts a real spectrum whose entries must all be integers.
    pub fn new(spectrum: &[T], eigenbasis: Operator<T>) -> Result<Self> {
        let ints = spectrum
            .iter()
            .map(|&x| {
                let r = x.round();
                if !x.is_finite() || (x - r).abs() > T::lit(1e-9) {
                    Err(Error::SpectrumNotInteger(x.as_f64()))
                } else {
                    Ok(r.as_f64() as i64)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_integers(ints, eigenbasis)
    }

    pub fn from_integers(spectrum: Vec<i64>, eigenbasis: Operator<T>) -> Result<Self> {
        if spectrum.len() < 2 {
            return Err(Error::InvalidGenerator("an n-level generator needs n >= 2".into()));
        }
        if eigenbasis.side() != spectrum.len() {
            return Err(Error::DimMismatch(format!(
                "eigenbasis of side {} for {} spectrum entries",
                eigenbasis.side(),
                spectrum.len()
            )));
        }
        let dev = eigenbasis.unitary_deviation();
        if dev > T::op_tol() {
            return Err(Error::NotUnitary(dev.as_f64()));
        }
        Ok(Self { spectrum, eigenbasis })
    }

    /// Default spectrum in the computational basis.
    pub fn standard(n: usize) -> Result<Self> {
        Self::from_integers(default_spectrum(n), Operator::identity(vec![n]))
    }

    pub fn with_spectrum(spectrum: Vec<i64>) -> Result<Self> {
        let n = spectrum.len();
        Self::from_integers(spectrum, Operator::identity(vec![n.max(1)]))
    }

    pub fn n(&self) -> usize {
        self.spectrum.len()
    }

    pub fn spectrum(&self) -> &[i64] {
        &self.spectrum
    }

    pub fn eigenbasis(&self) -> &Operator<T> {
        &self.eigenbasis
    }

    pub fn dims(&self) -> &[usize] {
        self.eigenbasis.dims()
    }

    fn in_eigenbasis(&self, diag: &[C<T>]) -> Operator<T> {
        let d = Operator::diagonal(self.dims().to_vec(), diag).expect("diagonal matches eigenbasis");
        &(&self.eigenbasis * &d) * &self.eigenbasis.adjoint()
    }

    /// `L_Z`
    pub fn generator(&self) -> Operator<T> {
        let diag: Vec<C<T>> = self.spectrum.iter().map(|&l| creal(T::lit(l as f64))).collect();
        self.in_eigenbasis(&diag)
    }

    /// `U = e^{2 pi i L_Z / n}`, built from exact roots of unity.
    pub fn clock(&self) -> Operator<T> {
        let n = self.n();
        let diag: Vec<C<T>> = self.spectrum.iter().map(|&l| root_of_unity(l, n)).collect();
        self.in_eigenbasis(&diag)
    }
}

/// Remote-side generator family of a protocol.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator<T> {
    /// Two-level stator built on an involution; the single generator is the involution itself.
    Involution(Involution<T>),
    /// n-level stator built on the clock of `L_Z`; generators are `L_Z^k`, `k = 1..n-1`.
    NLevel(NLevel<T>),
    /// One stator per remote party; generators are products of per-party powers.
    Product(Vec<Generator<T>>),
}

impl<T: Real> Generator<T> {
    /// Per-party factors (a single-party generator is its own only factor).
    pub fn parts(&self) -> &[Generator<T>] {
        match self {
            Generator::Product(parts) => parts,
            single => std::slice::from_ref(single),
        }
    }

    /// Alice-side dimension of the stator for each party.
    pub fn orders(&self) -> Vec<usize> {
        self.parts()
            .iter()
            .map(|p| match p {
                Generator::Involution(_) => 2,
                Generator::NLevel(nl) => nl.n(),
                Generator::Product(_) => 0,
            })
            .collect()
    }

    /// Number of independent generator terms: `prod(orders) - 1`.
    pub fn angle_count(&self) -> usize {
        self.orders().iter().product::<usize>() - 1
    }

    /// Register dims of the remote system(s), concatenated in party order.
    pub fn system_dims(&self) -> Vec<usize> {
        self.parts()
            .iter()
            .flat_map(|p| match p {
                Generator::Involution(g) => g.dims().to_vec(),
                Generator::NLevel(nl) => nl.dims().to_vec(),
                Generator::Product(_) => Vec::new(),
            })
            .collect()
    }

    fn check_flat(&self) -> Result<()> {
        if let Generator::Product(parts) = self {
            if parts.is_empty() {
                return Err(Error::InvalidGenerator("product needs at least one party".into()));
            }
            if parts.iter().any(|p| matches!(p, Generator::Product(_))) {
                return Err(Error::InvalidGenerator("nested products are not supported".into()));
            }
        }
        Ok(())
    }

    /// Remote-side generator of a single party (`sigma_n` or `L_Z`).
    pub(crate) fn remote_generator(&self) -> Operator<T> {
        match self {
            Generator::Involution(g) => g.operator().clone(),
            Generator::NLevel(nl) => nl.generator(),
            Generator::Product(_) => unreachable!("per-party generator of a product"),
        }
    }
}

/// A generator family together with one angle per generator term.
///
/// Angles are indexed by power tuples `(k_1, ..., k_N)` with `0 <= k_i < n_i`,
/// not all zero, enumerated in mixed radix with the first party most
/// significant; angle `i` belongs to the tuple whose mixed-radix value is `i + 1`.
/// For a single n-level party, angle `k - 1` multiplies `L_Z^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpec<T> {
    pub generator: Generator<T>,
    pub angles: Vec<T>,
}

impl<T: Real> GeneratorSpec<T> {
    pub fn new(generator: Generator<T>, angles: Vec<T>) -> Result<Self> {
        generator.check_flat()?;
        let expected = generator.angle_count();
        if angles.len() != expected {
            return Err(Error::DimMismatch(format!("{} angles for {expected} generator terms", angles.len())));
        }
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::Malformed("non-finite angle".into()));
        }
        Ok(Self { generator, angles })
    }

    pub fn involution(g: Involution<T>, alpha: T) -> Result<Self> {
        Self::new(Generator::Involution(g), vec![alpha])
    }

    pub fn n_level(nl: NLevel<T>, angles: Vec<T>) -> Result<Self> {
        Self::new(Generator::NLevel(nl), angles)
    }

    /// Product family with couplings keyed by power tuples; missing tuples get angle 0.
    pub fn product(parts: Vec<Generator<T>>, couplings: impl IntoIterator<Item = (Vec<usize>, T)>) -> Result<Self> {
        let generator = Generator::Product(parts);
        generator.check_flat()?;
        let orders = generator.orders();
        let mut angles = vec![T::zero(); generator.angle_count()];
        for (powers, angle) in couplings {
            let idx = power_index(&orders, &powers)?;
            angles[idx] = angles[idx] + angle;
        }
        Self::new(generator, angles)
    }

    /// `(powers, angle)` for every generator term, in angle order.
    pub fn terms(&self) -> Vec<(Vec<usize>, T)> {
        power_tuples(&self.generator.orders()).into_iter().zip(self.angles.iter().copied()).collect()
    }
}

/// Angle index of a nonzero power tuple.
pub fn power_index(orders: &[usize], powers: &[usize]) -> Result<usize> {
    if powers.len() != orders.len() || powers.iter().zip(orders).any(|(&k, &n)| k >= n) {
        return Err(Error::DimMismatch(format!("power tuple {powers:?} invalid for orders {orders:?}")));
    }
    let value = powers.iter().zip(orders).fold(0, |acc, (&k, &n)| acc * n + k);
    value.checked_sub(1).ok_or_else(|| Error::InvalidGenerator("the all-zero power tuple has no angle".into()))
}

/// All nonzero power tuples in angle order.
pub fn power_tuples(orders: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = orders.iter().product();
    (1..total)
        .map(|mut v| {
            let mut tuple = vec![0; orders.len()];
            for (slot, &n) in tuple.iter_mut().zip(orders).rev() {
                *slot = v % n;
                v /= n;
            }
            tuple
        })
        .collect()
}

/// Power tuple of a qubit subset (party indices are zero-based).
pub fn subset_powers(parties: usize, subset: &[usize]) -> Vec<usize> {
    let mut powers = vec![0; parties];
    for &i in subset {
        powers[i] = 1;
    }
    powers
}
