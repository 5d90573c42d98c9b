//! Closed-form physics of the two-level PT-symmetric model.
//!
//! The Hamiltonian is `H = [[s e^{iα}, s], [s, s e^{−iα}]]` with eigenvalues
//! `0` and `ω = 2 s cos α`. Its Hermitian counterpart `H₀ = s cos α·(I + σ_x)`
//! shares the spectrum. All formulas take ħ = 1.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::linalg::{Complex, Gate2, I};

/// Hamiltonian parameters `(s, α)` with `s > 0` and `α ∈ (−π/2, 0]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtParams {
    s: f64,
    alpha: f64,
}

impl PtParams {
    pub fn new(s: f64, alpha: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidParams(format!("s must be positive, got {s}")));
        }
        if !(alpha.is_finite() && alpha > -FRAC_PI_2 && alpha <= 0.0) {
            return Err(Error::InvalidParams(format!(
                "alpha must lie in (-pi/2, 0], got {alpha}"
            )));
        }
        Ok(Self { s, alpha })
    }

    /// Parameters with a prescribed eigenvalue gap: `s = ω / (2 cos α)`.
    pub fn with_omega(omega: f64, alpha: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParams(format!(
                "omega must be positive, got {omega}"
            )));
        }
        Self::new(omega / (2.0 * alpha.cos()), alpha)
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Eigenvalue gap `2 s cos α`.
    pub fn omega(&self) -> f64 {
        2.0 * self.s * self.alpha.cos()
    }

    /// Latest time for which the circuit angles reproduce the evolution
    /// (`ωt/2 ≤ π/2`); always at least [`tau`].
    pub fn circuit_time_limit(&self) -> f64 {
        PI / self.omega()
    }
}

/// Two-component work-qubit state from a closed-form evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolvedState {
    pub a0: Complex,
    pub a1: Complex,
    pub normalized: bool,
}

impl EvolvedState {
    pub fn amplitudes(&self) -> [Complex; 2] {
        [self.a0, self.a1]
    }

    pub fn norm(&self) -> f64 {
        (self.a0.norm_sqr() + self.a1.norm_sqr()).sqrt()
    }

    pub fn normalize(&self) -> Self {
        let n = self.norm();
        Self {
            a0: self.a0 / n,
            a1: self.a1 / n,
            normalized: true,
        }
    }
}

pub fn hamiltonian_pt(p: &PtParams) -> Gate2 {
    let s = Complex::new(p.s, 0.0);
    Gate2::new([
        [Complex::from_polar(p.s, p.alpha), s],
        [s, Complex::from_polar(p.s, -p.alpha)],
    ])
}

pub fn hamiltonian_hermitian(p: &PtParams) -> Gate2 {
    Gate2::from_real([[1.0, 1.0], [1.0, 1.0]]) * (p.s * p.alpha.cos())
}

/// `e^{−iHt}|0⟩` in closed form (not normalized).
pub fn evolve_pt_analytic(p: &PtParams, t: f64) -> Result<EvolvedState> {
    let cos_alpha = p.alpha.cos();
    if cos_alpha.abs() <= 1e-12 {
        return Err(Error::ExceptionalPoint { cos_alpha });
    }
    let half = 0.5 * p.omega() * t;
    let prefactor = Complex::from_polar(1.0 / cos_alpha, -t * p.s * cos_alpha);
    Ok(EvolvedState {
        a0: prefactor * (half - p.alpha).cos(),
        a1: prefactor * (-I * half.sin()),
        normalized: false,
    })
}

/// `e^{−iH₀t}|0⟩` in closed form; unit norm.
pub fn evolve_hermitian_analytic(p: &PtParams, t: f64) -> EvolvedState {
    let theta = p.s * p.alpha.cos() * t;
    let phase = Complex::from_polar(1.0, -theta);
    EvolvedState {
        a0: phase * theta.cos(),
        a1: phase * (-I * theta.sin()),
        normalized: true,
    }
}

/// First time the PT evolution reaches `|1⟩`: `(2/ω)(α + π/2)`.
pub fn tau(p: &PtParams) -> f64 {
    2.0 / p.omega() * (p.alpha + FRAC_PI_2)
}

/// First time the Hermitian evolution reaches `|1⟩`: `π/ω`.
pub fn tau0(p: &PtParams) -> f64 {
    PI / p.omega()
}

/// `sin x / x`, accurate through `x → 0`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Terms shared by the circuit angles and `q`:
/// `(2s·sin(ωt/2)/ω, cos(ωt/2))` with the ratio taken through [`sinc`].
fn circuit_terms(p: &PtParams, t: f64) -> (f64, f64) {
    let half = 0.5 * p.omega() * t;
    let ratio = 0.5 * t * sinc(half);
    (2.0 * p.s * ratio, half.cos())
}

/// Ancilla rotation angle of `V`.
///
/// The magnitude is `arccos(√(R² + c²) / √(R² + c² + R² sin²α))`. The sign is
/// negative (the sign of `R sin α` on the supported domain), which is what
/// makes the post-selected branch proportional to `e^{−iHt}|0⟩`.
pub fn phi_v(p: &PtParams, t: f64) -> f64 {
    let (r, c) = circuit_terms(p, t);
    let base = r * r + c * c;
    let extra = (r * p.alpha.sin()).powi(2);
    let ratio = (base / (base + extra)).sqrt().min(1.0);
    -ratio.acos()
}

/// Rotation angle of `U₁`: `arcsin(−R / √(R² + c²))`, in `[−π/2, 0]` for `t ≥ 0`
/// up to [`PtParams::circuit_time_limit`].
pub fn phi_u1(p: &PtParams, t: f64) -> f64 {
    let (r, c) = circuit_terms(p, t);
    let denom = (r * r + c * c).sqrt();
    (-r / denom).clamp(-1.0, 1.0).asin()
}

/// Amplitude factor of the post-selected branch:
/// `e^{i t s cos α} / √(R² + c² + R² sin²α)`.
pub fn q_factor(p: &PtParams, t: f64) -> Complex {
    let (r, c) = circuit_terms(p, t);
    let denom = (r * r + c * c + (r * p.alpha.sin()).powi(2)).sqrt();
    Complex::from_polar(1.0 / denom, t * p.s * p.alpha.cos())
}

/// `σ_x · conj(H) · σ_x`, the PT image of `h`.
pub fn pt_transform(h: &Gate2) -> Gate2 {
    let m = h.conj().entries;
    Gate2::new([[m[1][1], m[1][0]], [m[0][1], m[0][0]]])
}

/// The six α values of the experimental sweep, from 0 toward −π/2.
pub fn sweep_alphas() -> [f64; 6] {
    [
        0.0,
        -PI / 4.0,
        -3.0 * PI / 8.0,
        -7.0 * PI / 16.0,
        -15.0 * PI / 32.0,
        -31.0 * PI / 64.0,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expm_series, max_abs_diff, vec_max_abs_diff, ONE, ZERO};
    use std::f64::consts::SQRT_2;

    fn propagate(h: &Gate2, t: f64) -> [Complex; 2] {
        let u = expm_series(&(*h * (-I * t))).unwrap();
        u.apply(&[ONE, ZERO])
    }

    /// Roots of `λ² − tr·λ + det`.
    fn char_poly_roots(h: &Gate2) -> [Complex; 2] {
        let tr = h.trace();
        let det = h.entries[0][0] * h.entries[1][1] - h.entries[0][1] * h.entries[1][0];
        let disc = (tr * tr - det * 4.0).sqrt();
        [(tr - disc) * 0.5, (tr + disc) * 0.5]
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(PtParams::new(0.0, 0.0).is_err());
        assert!(PtParams::new(1.0, 0.1).is_err());
        assert!(PtParams::new(1.0, -FRAC_PI_2).is_err());
        assert!(PtParams::new(f64::NAN, 0.0).is_err());
        assert!(PtParams::with_omega(-1.0, 0.0).is_err());
    }

    #[test]
    fn hamiltonian_at_alpha_zero() {
        let p = PtParams::new(1.0, 0.0).unwrap();
        let h = hamiltonian_pt(&p);
        assert_eq!(h, Gate2::from_real([[1.0, 1.0], [1.0, 1.0]]));
        assert_eq!(hamiltonian_hermitian(&p), h);
        let [l0, l1] = char_poly_roots(&h);
        assert!(l0.norm() < 1e-15 && (l1 - 2.0).norm() < 1e-15);
    }

    #[test]
    fn eigenvalues_at_quarter_pi() {
        let p = PtParams::new(1.0, -PI / 4.0).unwrap();
        let [l0, l1] = char_poly_roots(&hamiltonian_pt(&p));
        assert!(l0.norm() < 1e-12);
        assert!((l1 - SQRT_2).norm() < 1e-12);
        let h0 = hamiltonian_hermitian(&p);
        assert!(
            max_abs_diff(
                &h0,
                &(Gate2::from_real([[1.0, 1.0], [1.0, 1.0]]) * (SQRT_2 / 2.0))
            ) < 1e-15
        );
    }

    #[test]
    fn pt_symmetry_holds() {
        for &alpha in &sweep_alphas() {
            let p = PtParams::new(1.3, alpha).unwrap();
            let h = hamiltonian_pt(&p);
            assert!(max_abs_diff(&pt_transform(&h), &h) < 1e-14);
        }
    }

    #[test]
    fn analytic_evolution_at_zero_time() {
        let p = PtParams::new(1.0, -PI / 4.0).unwrap();
        let e = evolve_pt_analytic(&p, 0.0).unwrap();
        assert!((e.a0 - ONE).norm() < 1e-15 && e.a1.norm() < 1e-15);
        let h = evolve_hermitian_analytic(&p, 0.0);
        assert_eq!(h.amplitudes(), [ONE, ZERO]);
    }

    #[test]
    fn analytic_matches_expm() {
        let p = PtParams::new(1.0, -PI / 4.0).unwrap();
        let got = evolve_pt_analytic(&p, 1.0).unwrap().amplitudes();
        let expect = propagate(&hamiltonian_pt(&p), 1.0);
        assert!(vec_max_abs_diff(&got, &expect) < 1e-12);
    }

    #[test]
    fn reaches_one_at_tau() {
        for &alpha in &sweep_alphas() {
            let p = PtParams::with_omega(2.0, alpha).unwrap();
            let e = evolve_pt_analytic(&p, tau(&p)).unwrap();
            assert!(e.a0.norm() < 1e-12, "alpha {alpha}: {}", e.a0.norm());
            let h = evolve_hermitian_analytic(&p, tau0(&p));
            assert!(h.a0.norm() < 1e-12);
        }
    }

    #[test]
    fn hermitian_at_eighth_turn() {
        let p = PtParams::new(1.0, 0.0).unwrap();
        let got = evolve_hermitian_analytic(&p, PI / 4.0).amplitudes();
        let expect = propagate(&hamiltonian_hermitian(&p), PI / 4.0);
        assert!(vec_max_abs_diff(&got, &expect) < 1e-14);
        let phase = Complex::from_polar(1.0, -PI / 4.0);
        let s = SQRT_2 / 2.0;
        let closed = [phase * s, phase * Complex::new(0.0, -s)];
        assert!(vec_max_abs_diff(&got, &closed) < 1e-15);
    }

    #[test]
    fn brachistochrone_times() {
        let p = PtParams::new(1.0, 0.0).unwrap();
        assert!((tau(&p) - FRAC_PI_2).abs() < 1e-15);
        assert!((tau0(&p) - FRAC_PI_2).abs() < 1e-15);

        let p = PtParams::new(1.0, -PI / 4.0).unwrap();
        assert!((tau(&p) / tau0(&p) - 0.5).abs() < 1e-15);
        assert!((tau(&p) - SQRT_2 * PI / 4.0).abs() < 1e-14);
        assert!((tau0(&p) - SQRT_2 * PI / 2.0).abs() < 1e-14);

        let p = PtParams::with_omega(2.0, -31.0 * PI / 64.0).unwrap();
        assert!((tau(&p) - PI / 64.0).abs() < 1e-14);
    }

    #[test]
    fn tau0_times_omega_is_pi() {
        for &alpha in &sweep_alphas() {
            let p = PtParams::new(0.7, alpha).unwrap();
            assert!((tau0(&p) * p.omega() - PI).abs() < 1e-14);
        }
    }

    #[test]
    fn tau_monotone_with_fixed_gap() {
        let alphas: Vec<f64> = (0..200)
            .map(|k| -FRAC_PI_2 + 1e-3 + k as f64 * 0.0078)
            .collect();
        let taus: Vec<f64> = alphas
            .iter()
            .filter(|a| **a <= 0.0)
            .map(|&a| tau(&PtParams::with_omega(2.0, a).unwrap()))
            .collect();
        assert!(taus.windows(2).all(|w| w[0] < w[1]));
        let near = PtParams::with_omega(2.0, -FRAC_PI_2 + 1e-6).unwrap();
        assert!(tau(&near) < 1e-5 * tau0(&near));
    }

    #[test]
    fn angles_vanish_at_zero_time() {
        let p = PtParams::new(1.0, -PI / 3.0).unwrap();
        assert_eq!(phi_v(&p, 0.0), 0.0);
        assert_eq!(phi_u1(&p, 0.0), 0.0);
        assert_eq!(q_factor(&p, 0.0), ONE);
    }

    #[test]
    fn phi_u1_at_quarter_period() {
        let p = PtParams::new(1.0, -PI / 4.0).unwrap();
        let t = PI / p.omega();
        assert!((phi_u1(&p, t) + FRAC_PI_2).abs() < 1e-7);
    }

    #[test]
    fn angle_ranges() {
        for &alpha in &sweep_alphas() {
            let p = PtParams::with_omega(2.0, alpha).unwrap();
            for k in 0..=20 {
                let t = p.circuit_time_limit() * k as f64 / 20.0;
                let v = phi_v(&p, t);
                let u = phi_u1(&p, t);
                assert!((-FRAC_PI_2..=0.0).contains(&v));
                assert!((-FRAC_PI_2..=0.0).contains(&u));
                let q = q_factor(&p, t).norm();
                assert!(q > 0.0 && q <= 1.0 + 1e-15);
            }
        }
    }

    #[test]
    fn q_approaches_inverse_sqrt3() {
        let p = PtParams::with_omega(2.0, -FRAC_PI_2 + 1e-3).unwrap();
        let q = q_factor(&p, tau(&p)).norm();
        assert!((q - 1.0 / 3f64.sqrt()).abs() < 1e-2);
    }

    #[test]
    fn non_unitary_norm_mid_evolution() {
        let p = PtParams::new(1.0, -PI / 4.0).unwrap();
        let n = evolve_pt_analytic(&p, tau(&p) / 2.0).unwrap().norm();
        assert!((n - 1.0).abs() > 1e-6);
    }

    #[test]
    fn sinc_is_continuous() {
        assert_eq!(sinc(0.0), 1.0);
        for &x in &[1e-5, 9.9e-5, 1e-4, 1.01e-4, 0.3] {
            assert!((sinc(x) - x.sin() / x).abs() < 1e-15);
        }
    }

    #[test]
    fn exceptional_point_detected() {
        // construct directly: the public constructor already excludes alpha = -pi/2
        let p = PtParams {
            s: 1.0,
            alpha: -FRAC_PI_2,
        };
        assert!(matches!(
            evolve_pt_analytic(&p, 1.0),
            Err(Error::ExceptionalPoint { .. })
        ));
    }
}
