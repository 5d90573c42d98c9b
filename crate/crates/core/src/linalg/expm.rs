use super::{eigen, CMat, Complex};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpmMethod {
    /// `V e^Λ V⁻¹` from an eigen-decomposition; rejects ill-conditioned inputs.
    Eig,
    /// Scaling and squaring around a truncated Taylor series.
    Series,
}

pub fn expm<const N: usize>(m: &CMat<N>, method: ExpmMethod) -> Result<CMat<N>> {
    match method {
        ExpmMethod::Eig => expm_eig(m),
        ExpmMethod::Series => expm_series(m),
    }
}

pub fn expm_eig<const N: usize>(m: &CMat<N>) -> Result<CMat<N>> {
    let e = eigen(m)?;
    let out = e.vectors * CMat::from_diagonal(e.values.map(Complex::exp)) * e.vectors_inv;
    if out.is_finite() {
        Ok(out)
    } else {
        Err(Error::NonFinite("expm output"))
    }
}

const SCALED_NORM: f64 = 0.5;
const MAX_TERMS: usize = 40;

pub fn expm_series<const N: usize>(m: &CMat<N>) -> Result<CMat<N>> {
    if !m.is_finite() {
        return Err(Error::NonFinite("expm input"));
    }
    let norm = m.norm_one();
    let squarings = if norm > SCALED_NORM {
        (norm / SCALED_NORM).log2().ceil() as i32
    } else {
        0
    };
    let a = *m * 0.5f64.powi(squarings);

    let mut sum = CMat::<N>::identity();
    let mut term = CMat::<N>::identity();
    for k in 1..=MAX_TERMS {
        term = term * a * (1.0 / k as f64);
        sum = sum + term;
        if term.norm_max() <= f64::EPSILON * 1e-3 * sum.norm_max() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    if sum.is_finite() {
        Ok(sum)
    } else {
        Err(Error::NonFinite("expm output"))
    }
}
