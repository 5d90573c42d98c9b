//! Fixed-size complex linear algebra for one and two qubits.

mod density;
mod eig;
mod expm;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

pub use num_complex::Complex64 as Complex;

pub use density::{fidelity, trace_distance, Density2};
pub use eig::{eigen, Eigen, CONDITION_BOUND};
pub use expm::{expm, expm_eig, expm_series, ExpmMethod};

use crate::error::{Error, Result};

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);
pub const I: Complex = Complex::new(0.0, 1.0);

/// Dense `N×N` complex matrix stored row-major by value.
#[derive(Clone, Copy, PartialEq)]
pub struct CMat<const N: usize> {
    pub entries: [[Complex; N]; N],
}

/// Single-qubit operator.
pub type Gate2 = CMat<2>;
/// Two-qubit operator, ancilla as the most significant qubit.
pub type Mat4 = CMat<4>;

impl<const N: usize> CMat<N> {
    pub const fn new(entries: [[Complex; N]; N]) -> Self {
        Self { entries }
    }

    pub fn zeros() -> Self {
        Self::new([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.entries[i][i] = ONE;
        }
        m
    }

    pub fn from_diagonal(diag: [Complex; N]) -> Self {
        let mut m = Self::zeros();
        for (i, d) in diag.into_iter().enumerate() {
            m.entries[i][i] = d;
        }
        m
    }

    pub fn from_real(entries: [[f64; N]; N]) -> Self {
        Self::new(entries.map(|row| row.map(|x| Complex::new(x, 0.0))))
    }

    pub fn dagger(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.entries[j][i] = self.entries[i][j].conj();
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        Self::new(self.entries.map(|row| row.map(|z| z.conj())))
    }

    pub fn scale(&self, k: Complex) -> Self {
        Self::new(self.entries.map(|row| row.map(|z| z * k)))
    }

    pub fn trace(&self) -> Complex {
        (0..N).map(|i| self.entries[i][i]).sum()
    }

    /// Maximum column sum of absolute values.
    pub fn norm_one(&self) -> f64 {
        (0..N)
            .map(|j| (0..N).map(|i| self.entries[i][j].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn norm_max(&self) -> f64 {
        self.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn norm_frobenius(&self) -> f64 {
        self.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Complex> {
        self.entries.iter().flatten()
    }

    pub fn is_finite(&self) -> bool {
        self.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `‖M†M − I‖_max`.
    pub fn unitarity_deviation(&self) -> f64 {
        max_abs_diff(&(self.dagger() * *self), &Self::identity())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    pub fn apply(&self, v: &[Complex; N]) -> [Complex; N] {
        let mut out = [ZERO; N];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..N).map(|j| self.entries[i][j] * v[j]).sum();
        }
        out
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Option<Self> {
        let mut a = *self;
        let mut inv = Self::identity();
        let scale = self.norm_max();
        if scale == 0.0 {
            return None;
        }
        for col in 0..N {
            let pivot = (col..N)
                .max_by(|&r, &s| {
                    a.entries[r][col]
                        .norm()
                        .total_cmp(&a.entries[s][col].norm())
                })
                .unwrap_or(col);
            if a.entries[pivot][col].norm() <= f64::EPSILON * scale {
                return None;
            }
            a.entries.swap(col, pivot);
            inv.entries.swap(col, pivot);
            let p = a.entries[col][col].inv();
            for j in 0..N {
                a.entries[col][j] *= p;
                inv.entries[col][j] *= p;
            }
            for r in 0..N {
                if r == col {
                    continue;
                }
                let f = a.entries[r][col];
                if f == ZERO {
                    continue;
                }
                for j in 0..N {
                    let (ac, ic) = (a.entries[col][j], inv.entries[col][j]);
                    a.entries[r][j] -= f * ac;
                    inv.entries[r][j] -= f * ic;
                }
            }
        }
        Some(inv)
    }
}

impl<const N: usize> Default for CMat<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Index<(usize, usize)> for CMat<N> {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.entries[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for CMat<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.entries[i][j]
    }
}

impl<const N: usize> Mul for CMat<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.entries[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..N {
                    m.entries[i][j] += a * rhs.entries[k][j];
                }
            }
        }
        m
    }
}

impl<const N: usize> Mul<Complex> for CMat<N> {
    type Output = Self;
    fn mul(self, k: Complex) -> Self {
        self.scale(k)
    }
}

impl<const N: usize> Mul<f64> for CMat<N> {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        self.scale(Complex::new(k, 0.0))
    }
}

impl<const N: usize> Add for CMat<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.entries[i][j] += rhs.entries[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Sub for CMat<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.entries[i][j] -= rhs.entries[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Neg for CMat<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

impl<const N: usize> fmt::Debug for CMat<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for row in &self.entries {
            write!(f, " ")?;
            for z in row {
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Largest entrywise modulus of `a − b`.
pub fn max_abs_diff<const N: usize>(a: &CMat<N>, b: &CMat<N>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Kronecker product `a ⊗ b`; `a` acts on the ancilla (left, most significant).
pub fn tensor(a: &Gate2, b: &Gate2) -> Mat4 {
    let mut m = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m.entries[2 * i + k][2 * j + l] = a.entries[i][j] * b.entries[k][l];
                }
            }
        }
    }
    m
}

pub fn pauli_x() -> Gate2 {
    Gate2::from_real([[0.0, 1.0], [1.0, 0.0]])
}

pub fn pauli_y() -> Gate2 {
    Gate2::new([[ZERO, -I], [I, ZERO]])
}

pub fn pauli_z() -> Gate2 {
    Gate2::from_real([[1.0, 0.0], [0.0, -1.0]])
}

pub fn state_norm<const N: usize>(v: &[Complex; N]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_max_abs_diff<const N: usize>(a: &[Complex; N], b: &[Complex; N]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Two-qubit pure state with amplitudes ordered `|a e⟩ = 00, 01, 10, 11`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    pub amps: [Complex; 4],
}

impl TwoQubitState {
    pub fn new(amps: [Complex; 4]) -> Self {
        Self { amps }
    }

    /// `|index⟩` in the computational basis.
    pub fn basis(index: usize) -> Self {
        let mut amps = [ZERO; 4];
        amps[index] = ONE;
        Self { amps }
    }

    /// `|0⟩ₐ|0⟩ₑ`.
    pub fn ground() -> Self {
        Self::basis(0)
    }

    pub fn norm(&self) -> f64 {
        state_norm(&self.amps)
    }

    pub fn apply(&self, op: &Mat4) -> Self {
        Self::new(op.apply(&self.amps))
    }

    pub fn check_finite(&self) -> Result<()> {
        if self
            .amps
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            Ok(())
        } else {
            Err(Error::NonFinite("two-qubit state"))
        }
    }
}
