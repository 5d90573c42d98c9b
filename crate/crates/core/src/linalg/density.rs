use super::{Complex, Gate2};
use crate::error::{Error, Result};

const TOL: f64 = 1e-12;

/// Validated single-qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Density2 {
    entries: Gate2,
}

impl Density2 {
    pub fn new(entries: Gate2) -> Result<Self> {
        if !entries.is_finite() {
            return Err(Error::NonFinite("density matrix"));
        }
        let m = &entries.entries;
        let herm = (m[1][0] - m[0][1].conj()).norm();
        if herm > TOL || m[0][0].im.abs() > TOL || m[1][1].im.abs() > TOL {
            return Err(Error::InvalidDensity(format!("not Hermitian ({herm:.3e})")));
        }
        let tr = entries.trace().re;
        if (tr - 1.0).abs() > TOL {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        let [low, _] = hermitian_eigenvalues(&entries);
        if low < -TOL {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {low:.3e}"
            )));
        }
        Ok(Self { entries })
    }

    /// Projector onto `v / ‖v‖`.
    pub fn from_pure(v: [Complex; 2]) -> Result<Self> {
        let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidDensity(format!("state norm {norm}")));
        }
        let u = v.map(|z| z / norm);
        let mut m = Gate2::zeros();
        for i in 0..2 {
            for j in 0..2 {
                m.entries[i][j] = u[i] * u[j].conj();
            }
        }
        // the outer product is exact up to rounding; pin the symmetric parts
        m.entries[0][0] = Complex::new(m.entries[0][0].re, 0.0);
        m.entries[1][1] = Complex::new(m.entries[1][1].re, 0.0);
        m.entries[1][0] = m.entries[0][1].conj();
        Self::new(m)
    }

    pub fn matrix(&self) -> &Gate2 {
        &self.entries
    }

    /// Row-major entries.
    pub fn to_rows(&self) -> [[Complex; 2]; 2] {
        self.entries.entries
    }

    fn det(&self) -> f64 {
        let m = &self.entries.entries;
        (m[0][0] * m[1][1] - m[0][1] * m[1][0]).re.max(0.0)
    }
}

/// Eigenvalues of a Hermitian 2×2 matrix in ascending order.
fn hermitian_eigenvalues(m: &Gate2) -> [f64; 2] {
    let a = m.entries[0][0].re;
    let d = m.entries[1][1].re;
    let b = m.entries[0][1].norm();
    let mid = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    [mid - rad, mid + rad]
}

/// Uhlmann fidelity `(tr √(√ρ σ √ρ))²`, via the qubit identity
/// `tr(ρσ) + 2√(det ρ · det σ)`.
pub fn fidelity(rho: &Density2, sigma: &Density2) -> f64 {
    let overlap = (rho.entries * sigma.entries).trace().re;
    (overlap + 2.0 * (rho.det() * sigma.det()).sqrt()).clamp(0.0, 1.0)
}

/// `½ ‖ρ − σ‖₁`.
pub fn trace_distance(rho: &Density2, sigma: &Density2) -> f64 {
    let diff = rho.entries - sigma.entries;
    let [l0, l1] = hermitian_eigenvalues(&diff);
    (0.5 * (l0.abs() + l1.abs())).clamp(0.0, 1.0)
}
