//! The two-qubit dilation circuit: `V` on the ancilla, a 0-controlled `U₁`,
//! a 1-controlled `U₂ = σ_z`, then a Hadamard on the ancilla. Post-selecting
//! the ancilla on `|0⟩` leaves the work qubit in `q/√2 · e^{−iHt}|0⟩`.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::linalg::{state_norm, tensor, Complex, Density2, Gate2, Mat4, TwoQubitState, I};
use crate::pt_model::{self, PtParams};

const UNITARY_TOL: f64 = 1e-12;
/// Ancilla-|0⟩ probabilities at or below this are treated as zero.
pub const POSTSELECT_THRESHOLD: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateLabel {
    /// `V` on the ancilla.
    V,
    C0U1,
    C1U2,
    /// Hadamard on the ancilla.
    HadamardAncilla,
    /// `V†` on the ancilla.
    VDagger,
}

impl GateLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            GateLabel::V => "V",
            GateLabel::C0U1 => "C0U1",
            GateLabel::C1U2 => "C1U2",
            GateLabel::HadamardAncilla => "H_a",
            GateLabel::VDagger => "Vdag",
        }
    }
}

/// Ordered two-qubit gates, earliest first.
#[derive(Debug, Clone, Default)]
pub struct GateSeq {
    ops: Vec<(GateLabel, Mat4)>,
}

impl GateSeq {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, label: GateLabel, op: Mat4) -> Result<()> {
        let deviation = op.unitarity_deviation();
        if deviation > UNITARY_TOL {
            return Err(Error::NonUnitaryGate { deviation });
        }
        self.ops.push((label, op));
        Ok(())
    }

    pub fn ops(&self) -> &[(GateLabel, Mat4)] {
        &self.ops
    }

    pub fn get(&self, label: GateLabel) -> Option<&Mat4> {
        self.ops.iter().find(|(l, _)| *l == label).map(|(_, m)| m)
    }

    /// Total operator `G_last ··· G_first`.
    pub fn product(&self) -> Mat4 {
        self.ops
            .iter()
            .fold(Mat4::identity(), |acc, (_, op)| *op * acc)
    }
}

pub fn gate_v(phi: f64) -> Gate2 {
    let (s, c) = phi.sin_cos();
    Gate2::from_real([[c, -s], [s, c]])
}

pub fn gate_u1(phi: f64) -> Gate2 {
    let (s, c) = phi.sin_cos();
    let c = Complex::new(c, 0.0);
    Gate2::new([[c, I * s], [I * s, c]])
}

pub fn gate_u2() -> Gate2 {
    Gate2::from_real([[1.0, 0.0], [0.0, -1.0]])
}

pub fn gate_hadamard() -> Gate2 {
    Gate2::from_real([[1.0, 1.0], [1.0, -1.0]]) * FRAC_1_SQRT_2
}

/// `cos θ·I − i sin θ·σ_x`, the single-qubit part of `e^{−iH₀t}` with
/// `θ = s cos α·t`.
pub fn gate_hermitian_rotation(theta: f64) -> Gate2 {
    let (s, c) = theta.sin_cos();
    let c = Complex::new(c, 0.0);
    Gate2::new([[c, -I * s], [-I * s, c]])
}

/// Block-diagonal operator applying `gate` to the work qubit when the ancilla
/// equals `control_value`.
pub fn controlled(gate: &Gate2, control_value: u8) -> Result<Mat4> {
    let deviation = gate.unitarity_deviation();
    if deviation > UNITARY_TOL {
        return Err(Error::NonUnitaryGate { deviation });
    }
    let offset = match control_value {
        0 => 0,
        1 => 2,
        other => {
            return Err(Error::InvalidParams(format!(
                "control value must be 0 or 1, got {other}"
            )))
        }
    };
    let mut m = Mat4::identity();
    for i in 0..2 {
        for j in 0..2 {
            m.entries[offset + i][offset + j] = gate.entries[i][j];
        }
    }
    Ok(m)
}

fn on_ancilla(g: &Gate2) -> Mat4 {
    tensor(g, &Gate2::identity())
}

pub fn build_pt_circuit(p: &PtParams, t: f64) -> Result<GateSeq> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "t must be non-negative, got {t}"
        )));
    }
    let mut seq = GateSeq::new();
    seq.push(GateLabel::V, on_ancilla(&gate_v(pt_model::phi_v(p, t))))?;
    seq.push(
        GateLabel::C0U1,
        controlled(&gate_u1(pt_model::phi_u1(p, t)), 0)?,
    )?;
    seq.push(GateLabel::C1U2, controlled(&gate_u2(), 1)?)?;
    seq.push(GateLabel::HadamardAncilla, on_ancilla(&gate_hadamard()))?;
    Ok(seq)
}

/// Comparison circuit for `H₀`: `U₁, U₂, H` replaced by `Ũ, Ũ, V†`.
pub fn build_hermitian_circuit(p: &PtParams, t: f64) -> Result<GateSeq> {
    build_hermitian_circuit_with_phi(p, t, pt_model::phi_v(p, t))
}

/// [`build_hermitian_circuit`] with an explicit `V` angle; the work-qubit
/// output does not depend on it.
pub fn build_hermitian_circuit_with_phi(p: &PtParams, t: f64, phi_v: f64) -> Result<GateSeq> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "t must be non-negative, got {t}"
        )));
    }
    let rot = gate_hermitian_rotation(hermitian_angle(p, t));
    let v = gate_v(phi_v);
    let mut seq = GateSeq::new();
    seq.push(GateLabel::V, on_ancilla(&v))?;
    seq.push(GateLabel::C0U1, controlled(&rot, 0)?)?;
    seq.push(GateLabel::C1U2, controlled(&rot, 1)?)?;
    seq.push(GateLabel::VDagger, on_ancilla(&v.dagger()))?;
    Ok(seq)
}

/// `θ = s cos α · t`.
pub fn hermitian_angle(p: &PtParams, t: f64) -> f64 {
    p.s() * p.alpha().cos() * t
}

/// Global phase `e^{−iθ}` separating `Ũ|0⟩` from `e^{−iH₀t}|0⟩`.
pub fn hermitian_global_phase(p: &PtParams, t: f64) -> Complex {
    Complex::from_polar(1.0, -hermitian_angle(p, t))
}

pub fn run(seq: &GateSeq, input: &TwoQubitState) -> TwoQubitState {
    seq.ops()
        .iter()
        .fold(*input, |state, (_, op)| state.apply(op))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PostSelection {
    /// `(⟨00|ψ⟩, ⟨01|ψ⟩)`, not renormalized.
    pub raw_work_state: [Complex; 2],
    pub probability: f64,
    pub normalized_work_state: [Complex; 2],
}

pub fn post_select_ancilla0(state: &TwoQubitState) -> Result<PostSelection> {
    state.check_finite()?;
    let raw = [state.amps[0], state.amps[1]];
    let norm = state_norm(&raw);
    let probability = norm * norm;
    if probability <= POSTSELECT_THRESHOLD {
        return Err(Error::ZeroProbability { probability });
    }
    Ok(PostSelection {
        raw_work_state: raw,
        probability,
        normalized_work_state: raw.map(|z| z / norm),
    })
}

pub fn work_density_matrix(ps: &PostSelection) -> Result<Density2> {
    if ps.probability <= POSTSELECT_THRESHOLD {
        return Err(Error::ZeroProbability {
            probability: ps.probability,
        });
    }
    Density2::from_pure(ps.normalized_work_state)
}

/// Runs the PT circuit on `|0⟩ₐ|0⟩ₑ` and post-selects the ancilla.
pub fn simulate_pt(p: &PtParams, t: f64) -> Result<PostSelection> {
    let seq = build_pt_circuit(p, t)?;
    post_select_ancilla0(&run(&seq, &TwoQubitState::ground()))
}

pub fn simulate_hermitian(p: &PtParams, t: f64) -> Result<PostSelection> {
    let seq = build_hermitian_circuit(p, t)?;
    post_select_ancilla0(&run(&seq, &TwoQubitState::ground()))
}

/// `min_θ max_k |a_k − e^{iθ} b_k|` with `θ` fitted from the overlap `⟨b|a⟩`.
pub fn phase_aligned_diff(a: &[Complex; 2], b: &[Complex; 2]) -> f64 {
    let overlap: Complex = a.iter().zip(b).map(|(x, y)| y.conj() * x).sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex::new(1.0, 0.0)
    };
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - phase * y).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expm_series, max_abs_diff, pauli_x, pauli_z, vec_max_abs_diff, ONE, ZERO};
    use crate::pt_model::{
        evolve_hermitian_analytic, evolve_pt_analytic, hamiltonian_pt, q_factor, sweep_alphas, tau,
        tau0,
    };
    use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn elementary_gates() {
        assert_eq!(gate_v(0.0), Gate2::identity());
        assert!(max_abs_diff(&gate_u1(-FRAC_PI_2), &(pauli_x() * -I)) < 1e-15);
        assert!(max_abs_diff(&(gate_hadamard() * gate_hadamard()), &Gate2::identity()) < 1e-15);
        for g in [
            gate_v(0.7),
            gate_u1(-1.1),
            gate_u2(),
            gate_hadamard(),
            gate_hermitian_rotation(2.3),
        ] {
            assert!(g.is_unitary(1e-14));
        }
    }

    #[test]
    fn controlled_blocks() {
        assert_eq!(controlled(&Gate2::identity(), 0).unwrap(), Mat4::identity());
        assert_eq!(
            controlled(&pauli_z(), 1).unwrap(),
            Mat4::from_diagonal([ONE, ONE, ONE, -ONE])
        );
        let out = TwoQubitState::ground().apply(&controlled(&pauli_x(), 0).unwrap());
        assert_eq!(out, TwoQubitState::basis(1));
        let not_unitary = Gate2::from_real([[2.0, 0.0], [0.0, 1.0]]);
        assert!(matches!(
            controlled(&not_unitary, 0),
            Err(Error::NonUnitaryGate { .. })
        ));
        assert!(controlled(&pauli_x(), 2).is_err());
    }

    #[test]
    fn run_identity_and_hadamard() {
        let input = TwoQubitState::new([c(0.6, 0.0), c(0.0, 0.8), ZERO, ZERO]);
        assert_eq!(run(&GateSeq::new(), &input), input);
        let mut seq = GateSeq::new();
        seq.push(GateLabel::HadamardAncilla, on_ancilla(&gate_hadamard()))
            .unwrap();
        let out = run(&seq, &TwoQubitState::ground());
        let h = FRAC_1_SQRT_2;
        assert!(vec_max_abs_diff(&out.amps, &[c(h, 0.0), ZERO, c(h, 0.0), ZERO]) < 1e-15);
    }

    #[test]
    fn post_selection_cases() {
        let h = FRAC_1_SQRT_2;
        let ps =
            post_select_ancilla0(&TwoQubitState::new([c(h, 0.0), ZERO, c(h, 0.0), ZERO])).unwrap();
        assert!((ps.probability - 0.5).abs() < 1e-15);
        assert!(vec_max_abs_diff(&ps.normalized_work_state, &[ONE, ZERO]) < 1e-15);
        assert!(matches!(
            post_select_ancilla0(&TwoQubitState::basis(3)),
            Err(Error::ZeroProbability { .. })
        ));
    }

    #[test]
    fn density_of_work_states() {
        let ps = |v: [Complex; 2]| PostSelection {
            raw_work_state: v,
            probability: 1.0,
            normalized_work_state: v,
        };
        let rho = work_density_matrix(&ps([ONE, ZERO])).unwrap();
        assert_eq!(rho.to_rows(), [[ONE, ZERO], [ZERO, ZERO]]);
        let rho = work_density_matrix(&ps([ZERO, ONE])).unwrap();
        assert_eq!(rho.to_rows(), [[ZERO, ZERO], [ZERO, ONE]]);
        let h = FRAC_1_SQRT_2;
        let rho = work_density_matrix(&ps([c(h, 0.0), c(0.0, -h)])).unwrap();
        let expect = Gate2::new([[c(0.5, 0.0), c(0.0, 0.5)], [c(0.0, -0.5), c(0.5, 0.0)]]);
        assert!(max_abs_diff(rho.matrix(), &expect) < 1e-15);
    }

    #[test]
    fn pt_circuit_at_zero_time() {
        let p = PtParams::new(1.0, -PI / 4.0).unwrap();
        let ps = simulate_pt(&p, 0.0).unwrap();
        assert!((ps.probability - 0.5).abs() < 1e-15);
        assert!(vec_max_abs_diff(&ps.normalized_work_state, &[ONE, ZERO]) < 1e-15);
    }

    #[test]
    fn pt_circuit_reaches_one_at_tau() {
        for &alpha in &sweep_alphas() {
            let p = PtParams::with_omega(2.0, alpha).unwrap();
            let ps = simulate_pt(&p, tau(&p)).unwrap();
            assert!(ps.normalized_work_state[0].norm() < 1e-10);
            assert!((ps.normalized_work_state[1].norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn dilation_identity_quarter_pi() {
        let p = PtParams::new(1.0, -PI / 4.0).unwrap();
        for k in 0..=8 {
            let t = tau(&p) * k as f64 / 8.0;
            let ps = simulate_pt(&p, t).unwrap();
            let q = q_factor(&p, t);
            let lhs = ps.raw_work_state.map(|z| z * SQRT_2 / q);
            let u = expm_series(&(hamiltonian_pt(&p) * (-I * t))).unwrap();
            let rhs = u.apply(&[ONE, ZERO]);
            assert!(vec_max_abs_diff(&lhs, &rhs) < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn postselect_probability_at_tau() {
        let p = PtParams::new(1.0, -PI / 4.0).unwrap();
        let t = tau(&p);
        let ps = simulate_pt(&p, t).unwrap();
        let u = expm_series(&(hamiltonian_pt(&p) * (-I * t))).unwrap();
        let branch = state_norm(&u.apply(&[ONE, ZERO]));
        let expect = q_factor(&p, t).norm_sqr() * branch * branch / 2.0;
        assert!((ps.probability - expect).abs() < 1e-12);
    }

    #[test]
    fn mid_evolution_density_matches_analytic() {
        let p = PtParams::with_omega(2.0, -31.0 * PI / 64.0).unwrap();
        let t = tau(&p) / 2.0;
        let rho = work_density_matrix(&simulate_pt(&p, t).unwrap()).unwrap();
        let theory = Density2::from_pure(evolve_pt_analytic(&p, t).unwrap().amplitudes()).unwrap();
        assert!(max_abs_diff(rho.matrix(), theory.matrix()) < 1e-10);
    }

    #[test]
    fn hermitian_circuit() {
        for &alpha in &sweep_alphas() {
            let p = PtParams::with_omega(2.0, alpha).unwrap();
            for t in [0.0, tau0(&p) / 2.0, tau0(&p)] {
                let ps = simulate_hermitian(&p, t).unwrap();
                assert!((ps.probability - 1.0).abs() < 1e-12);
                let phased = ps.raw_work_state.map(|z| z * hermitian_global_phase(&p, t));
                let expect = evolve_hermitian_analytic(&p, t).amplitudes();
                assert!(vec_max_abs_diff(&phased, &expect) < 1e-12);
            }
            let ps = simulate_hermitian(&p, tau0(&p)).unwrap();
            assert!(ps.normalized_work_state[0].norm() < 1e-12);
        }
    }

    #[test]
    fn hermitian_circuit_ignores_v_angle() {
        let p = PtParams::new(1.0, -PI / 3.0).unwrap();
        let t = 0.4;
        let a = run(
            &build_hermitian_circuit(&p, t).unwrap(),
            &TwoQubitState::ground(),
        );
        let b = run(
            &build_hermitian_circuit_with_phi(&p, t, 0.0).unwrap(),
            &TwoQubitState::ground(),
        );
        assert!(vec_max_abs_diff(&a.amps, &b.amps) < 1e-12);
    }

    #[test]
    fn alpha_zero_circuits_coincide() {
        let p = PtParams::new(1.0, 0.0).unwrap();
        for k in 0..=10 {
            let t = tau(&p) * k as f64 / 10.0;
            let a = simulate_pt(&p, t).unwrap().normalized_work_state;
            let b = simulate_hermitian(&p, t).unwrap().normalized_work_state;
            assert!(vec_max_abs_diff(&a, &b) < 1e-10);
        }
    }

    #[test]
    fn rejects_negative_time() {
        let p = PtParams::new(1.0, 0.0).unwrap();
        assert!(build_pt_circuit(&p, -1.0).is_err());
        assert!(build_hermitian_circuit(&p, f64::NAN).is_err());
    }

    #[test]
    fn phase_alignment() {
        let a = [c(0.6, 0.0), c(0.0, 0.8)];
        let b = a.map(|z| z * Complex::from_polar(1.0, 1.234));
        assert!(phase_aligned_diff(&a, &b) < 1e-15);
    }
}
