//! Eigen-decomposition of small general complex matrices.
//!
//! A complex Schur form `A = Q T Q†` is computed by shifted QR iteration,
//! eigenvectors are recovered from `T` by back-substitution and mapped back
//! through `Q`.

#![allow(clippy::needless_range_loop)]

use super::{CMat, Complex, ONE, ZERO};
use crate::error::{Error, Result};

/// Largest eigenvector-matrix condition number accepted by [`eigen`].
pub const CONDITION_BOUND: f64 = 1e8;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

#[derive(Debug, Clone, Copy)]
pub struct Eigen<const N: usize> {
    pub values: [Complex; N],
    /// Columns are unit-norm right eigenvectors.
    pub vectors: CMat<N>,
    pub vectors_inv: CMat<N>,
    /// Frobenius condition estimate `‖V‖_F ‖V⁻¹‖_F`.
    pub condition: f64,
}

/// Diagonalizes `m`, failing when the eigenvector basis is ill-conditioned.
pub fn eigen<const N: usize>(m: &CMat<N>) -> Result<Eigen<N>> {
    if !m.is_finite() {
        return Err(Error::NonFinite("eigen input"));
    }
    let (q, t) = schur(m).ok_or(Error::NonDiagonalizable {
        condition: f64::INFINITY,
    })?;
    let values: [Complex; N] = std::array::from_fn(|i| t.entries[i][i]);

    let small = (f64::EPSILON * t.norm_max()).max(1e-300);
    let mut y = CMat::<N>::zeros();
    for k in 0..N {
        y.entries[k][k] = ONE;
        for i in (0..k).rev() {
            let acc: Complex = (i + 1..=k).map(|j| t.entries[i][j] * y.entries[j][k]).sum();
            if acc == ZERO {
                continue;
            }
            let mut denom = t.entries[i][i] - values[k];
            if denom.norm() < small {
                denom = Complex::new(small, 0.0);
            }
            y.entries[i][k] = -acc / denom;
        }
    }
    let mut vectors = q * y;
    for k in 0..N {
        let norm = (0..N)
            .map(|i| vectors.entries[i][k].norm_sqr())
            .sum::<f64>()
            .sqrt();
        for i in 0..N {
            vectors.entries[i][k] /= norm;
        }
    }
    let vectors_inv = vectors.inverse().ok_or(Error::NonDiagonalizable {
        condition: f64::INFINITY,
    })?;
    let condition = vectors.norm_frobenius() * vectors_inv.norm_frobenius();
    if !condition.is_finite() || condition > CONDITION_BOUND {
        return Err(Error::NonDiagonalizable { condition });
    }
    Ok(Eigen {
        values,
        vectors,
        vectors_inv,
        condition,
    })
}

/// Complex Schur decomposition; returns `(Q, T)` with `A = Q T Q†`.
fn schur<const N: usize>(a: &CMat<N>) -> Option<(CMat<N>, CMat<N>)> {
    let mut t = *a;
    let mut q = CMat::<N>::identity();
    let norm = a.norm_frobenius().max(f64::MIN_POSITIVE);
    let mut active = N;
    let mut sweeps = 0;
    while active > 1 {
        let last = active - 1;
        let off: f64 = (0..last)
            .map(|j| t.entries[last][j].norm())
            .fold(0.0, f64::max);
        if off <= f64::EPSILON * norm {
            for j in 0..last {
                t.entries[last][j] = ZERO;
            }
            active -= 1;
            sweeps = 0;
            continue;
        }
        sweeps += 1;
        if sweeps > MAX_SWEEPS_PER_EIGENVALUE {
            return None;
        }
        let shift = if sweeps % 11 == 0 {
            // exceptional shift to break cycles
            t.entries[last][last] + Complex::new(0.75 * off, 0.43 * off)
        } else {
            wilkinson_shift(&t, last)
        };
        let qk = shifted_qr_step(&t, active, shift);
        t = qk.dagger() * t * qk;
        q = q * qk;
    }
    Some((q, t))
}

/// Eigenvalue of the trailing 2×2 block of the active window closest to its
/// last diagonal entry.
fn wilkinson_shift<const N: usize>(t: &CMat<N>, last: usize) -> Complex {
    let a = t.entries[last - 1][last - 1];
    let b = t.entries[last - 1][last];
    let c = t.entries[last][last - 1];
    let d = t.entries[last][last];
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5 * ((a - d) * 0.5) + b * c).sqrt();
    let (l1, l2) = (half_tr + disc, half_tr - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Unitary `Q` (identity outside the active window) from the Householder QR
/// factorization of the active window of `t − shift·I`.
fn shifted_qr_step<const N: usize>(t: &CMat<N>, active: usize, shift: Complex) -> CMat<N> {
    let mut r = *t;
    for i in 0..active {
        r.entries[i][i] -= shift;
    }
    let mut q = CMat::<N>::identity();
    for k in 0..active.saturating_sub(1) {
        let xnorm = (k..active)
            .map(|i| r.entries[i][k].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = r.entries[k][k];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };
        let alpha = -phase * xnorm;
        let mut v = [ZERO; N];
        for i in k..active {
            v[i] = r.entries[i][k];
        }
        v[k] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // R <- H R, Q <- Q H with H = I - 2 v v† / (v† v)
        for j in 0..N {
            let dot: Complex = (k..active).map(|i| v[i].conj() * r.entries[i][j]).sum();
            let f = dot * (2.0 / vnorm2);
            for i in k..active {
                r.entries[i][j] -= v[i] * f;
            }
        }
        for i in 0..N {
            let dot: Complex = (k..active).map(|j| q.entries[i][j] * v[j]).sum();
            let f = dot * (2.0 / vnorm2);
            for j in k..active {
                q.entries[i][j] -= f * v[j].conj();
            }
        }
    }
    q
}
