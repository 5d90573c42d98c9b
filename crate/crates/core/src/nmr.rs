//! NMR pulse sequences for the dilation circuit on a J-coupled spin pair.
//!
//! Notation follows the usual liquid-state conventions: `[φ]_j^m` is the
//! rotation `e^{−iφσ_j^m/2}` of spin `m`, and `[X]` is free evolution
//! `e^{−iπJXσ_z^a σ_z^e/2}` for `X` seconds. Sequences are listed in
//! chronological order; the compiled operator is `P_last ··· P_first`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::circuit::{
    self, controlled, gate_hadamard, gate_u1, gate_u2, gate_v, GateLabel, PostSelection,
};
use crate::error::{Error, Result};
use crate::linalg::{
    max_abs_diff, pauli_x, pauli_y, tensor, Complex, Gate2, Mat4, TwoQubitState, I,
};
use crate::pt_model::{self, PtParams};

/// Scalar coupling of ¹³C–¹H in chloroform, Hz.
pub const DEFAULT_J_HZ: f64 = 215.23;
/// Assumed π/2 hard-pulse width, seconds.
pub const DEFAULT_T_PI2: f64 = 10e-6;
/// Residual below which a compiled schedule counts as equal to its target.
pub const VERIFY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Ancilla,
    Work,
    /// Both spins rotated simultaneously.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    PlusX,
    MinusX,
    PlusY,
    MinusY,
}

impl Spin {
    pub fn as_str(&self) -> &'static str {
        match self {
            Spin::Ancilla => "ancilla",
            Spin::Work => "work",
            Spin::Both => "both",
        }
    }
}

impl FromStr for Spin {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ancilla" => Ok(Spin::Ancilla),
            "work" => Ok(Spin::Work),
            "both" => Ok(Spin::Both),
            other => Err(Error::InvalidParams(format!("unknown spin '{other}'"))),
        }
    }
}

impl Axis {
    pub fn as_str(&self) -> &'static str {
        match self {
            Axis::PlusX => "+x",
            Axis::MinusX => "-x",
            Axis::PlusY => "+y",
            Axis::MinusY => "-y",
        }
    }

    fn pauli(&self) -> Gate2 {
        match self {
            Axis::PlusX => pauli_x(),
            Axis::MinusX => -pauli_x(),
            Axis::PlusY => pauli_y(),
            Axis::MinusY => -pauli_y(),
        }
    }
}

impl FromStr for Axis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+x" | "x" => Ok(Axis::PlusX),
            "-x" => Ok(Axis::MinusX),
            "+y" | "y" => Ok(Axis::PlusY),
            "-y" => Ok(Axis::MinusY),
            other => Err(Error::InvalidParams(format!("unknown axis '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseOp {
    Rotation {
        spin: Spin,
        axis: Axis,
        angle: f64,
    },
    /// Free evolution for the bracket value `duration` (seconds). A negative
    /// bracket is evolution under the sign-reversed coupling and takes
    /// `|duration|` of wall-clock time.
    FreeEvolution {
        duration: f64,
    },
}

impl PulseOp {
    pub fn rot(spin: Spin, axis: Axis, angle: f64) -> Self {
        PulseOp::Rotation { spin, axis, angle }
    }

    pub fn free(duration: f64) -> Self {
        PulseOp::FreeEvolution { duration }
    }

    /// Wall-clock time under `cfg`'s duration model.
    pub fn duration(&self, cfg: &NmrConfig) -> f64 {
        match *self {
            PulseOp::Rotation { angle, .. } => angle.abs() / FRAC_PI_2 * cfg.t_pi2,
            PulseOp::FreeEvolution { duration } => duration.abs(),
        }
    }

    pub fn propagator(&self, cfg: &NmrConfig) -> Mat4 {
        match *self {
            PulseOp::Rotation { spin, axis, angle } => {
                let r = rotation(&axis.pauli(), angle);
                match spin {
                    Spin::Ancilla => tensor(&r, &Gate2::identity()),
                    Spin::Work => tensor(&Gate2::identity(), &r),
                    Spin::Both => tensor(&r, &r),
                }
            }
            PulseOp::FreeEvolution { duration } => {
                let theta = PI * cfg.j_hz * duration / 2.0;
                let minus = Complex::from_polar(1.0, -theta);
                let plus = Complex::from_polar(1.0, theta);
                Mat4::from_diagonal([minus, plus, plus, minus])
            }
        }
    }
}

/// `e^{−iφσ/2}` for a Pauli (or negated Pauli) `σ`.
fn rotation(sigma: &Gate2, angle: f64) -> Gate2 {
    let (s, c) = (0.5 * angle).sin_cos();
    Gate2::identity() * c - *sigma * (I * s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NmrConfig {
    pub j_hz: f64,
    pub t_pi2: f64,
}

impl NmrConfig {
    pub fn new(j_hz: f64, t_pi2: f64) -> Result<Self> {
        if !(j_hz.is_finite() && j_hz > 0.0) {
            return Err(Error::InvalidParams(format!(
                "J must be positive, got {j_hz}"
            )));
        }
        if !(t_pi2.is_finite() && t_pi2 >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "pi/2 pulse width must be non-negative, got {t_pi2}"
            )));
        }
        Ok(Self { j_hz, t_pi2 })
    }
}

impl Default for NmrConfig {
    fn default() -> Self {
        Self {
            j_hz: DEFAULT_J_HZ,
            t_pi2: DEFAULT_T_PI2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseSchedule {
    ops: Vec<PulseOp>,
    config: NmrConfig,
}

impl PulseSchedule {
    pub fn new(config: NmrConfig) -> Self {
        Self {
            ops: Vec::new(),
            config,
        }
    }

    pub fn from_ops(ops: Vec<PulseOp>, config: NmrConfig) -> Self {
        Self { ops, config }
    }

    pub fn push(&mut self, op: PulseOp) {
        self.ops.push(op);
    }

    pub fn ops(&self) -> &[PulseOp] {
        &self.ops
    }

    pub fn config(&self) -> &NmrConfig {
        &self.config
    }

    pub fn total_duration(&self) -> f64 {
        self.ops
            .iter()
            .fold(0.0, |acc, op| acc + op.duration(&self.config))
    }

    /// `self` followed by `next`.
    pub fn then(mut self, next: &PulseSchedule) -> Self {
        self.ops.extend_from_slice(&next.ops);
        self
    }

    /// One op per line (`ROT <spin> <axis> <angle>` / `FREE <seconds>`)
    /// followed by `TOTAL <seconds>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for op in &self.ops {
            match op {
                PulseOp::Rotation { spin, axis, angle } => out.push_str(&format!(
                    "ROT {} {} {}\n",
                    spin.as_str(),
                    axis.as_str(),
                    fmt_num(*angle)
                )),
                PulseOp::FreeEvolution { duration } => {
                    out.push_str(&format!("FREE {}\n", fmt_num(*duration)))
                }
            }
        }
        out.push_str(&format!("TOTAL {}\n", fmt_num(self.total_duration())));
        out
    }

    /// Parses [`Self::to_text`] output; blank lines and `#` comments are skipped
    /// and the `TOTAL` line, if present, must agree with the parsed ops.
    pub fn from_text(text: &str, config: NmrConfig) -> Result<Self> {
        let bad = |line: &str| Error::InvalidParams(format!("malformed pulse line '{line}'"));
        let num = |tok: Option<&str>, line: &str| -> Result<f64> {
            tok.and_then(|t| t.parse::<f64>().ok())
                .filter(|x| x.is_finite())
                .ok_or_else(|| bad(line))
        };
        let mut schedule = Self::new(config);
        let mut total = None;
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut tokens = line.split_whitespace();
            match tokens.next() {
                Some("ROT") => {
                    let spin = tokens.next().ok_or_else(|| bad(line))?.parse()?;
                    let axis = tokens.next().ok_or_else(|| bad(line))?.parse()?;
                    let angle = num(tokens.next(), line)?;
                    schedule.push(PulseOp::rot(spin, axis, angle));
                }
                Some("FREE") => schedule.push(PulseOp::free(num(tokens.next(), line)?)),
                Some("TOTAL") => total = Some(num(tokens.next(), line)?),
                _ => return Err(bad(line)),
            }
            if tokens.next().is_some() {
                return Err(bad(line));
            }
        }
        if let Some(total) = total {
            let computed = schedule.total_duration();
            if (total - computed).abs() > 1e-12 * computed.abs().max(1e-9) {
                return Err(Error::InvalidParams(format!(
                    "TOTAL {total} disagrees with ops ({computed})"
                )));
            }
        }
        Ok(schedule)
    }
}

/// 17 significant digits, round-trip exact.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// `[2φ_V]_y^a`, or no pulse at all when `φ_V = 0`.
pub fn schedule_v(phi_v: f64, cfg: &NmrConfig) -> PulseSchedule {
    let mut schedule = PulseSchedule::new(*cfg);
    if phi_v != 0.0 {
        schedule.push(PulseOp::rot(Spin::Ancilla, Axis::PlusY, 2.0 * phi_v));
    }
    schedule
}

/// `[π/2]_y^e → [X] → [π]_x^{a,e} → [X] → [π]_{−x}^{a,e} → [π/2]_{−y}^e → [φ]_{−x}^e`
/// with `X = bracket_sign·φ/(2πJ)`.
fn coupled_rotation(phi: f64, bracket_sign: f64, cfg: &NmrConfig) -> PulseSchedule {
    let bracket = bracket_sign * phi / (2.0 * PI * cfg.j_hz);
    PulseSchedule::from_ops(
        vec![
            PulseOp::rot(Spin::Work, Axis::PlusY, FRAC_PI_2),
            PulseOp::free(bracket),
            PulseOp::rot(Spin::Both, Axis::PlusX, PI),
            PulseOp::free(bracket),
            PulseOp::rot(Spin::Both, Axis::MinusX, PI),
            PulseOp::rot(Spin::Work, Axis::MinusY, FRAC_PI_2),
            // written [−φ]_x^e elsewhere; same operator e^{+iφσ_x/2}
            PulseOp::rot(Spin::Work, Axis::MinusX, phi),
        ],
        *cfg,
    )
}

/// 0-controlled `U₁(φ)`.
pub fn schedule_c0u1(phi_u1: f64, cfg: &NmrConfig) -> PulseSchedule {
    coupled_rotation(phi_u1, 1.0, cfg)
}

/// 1-controlled `U₁(φ)`: the [`schedule_c0u1`] skeleton with negated
/// free-evolution brackets.
pub fn schedule_c1_rotation(phi: f64, cfg: &NmrConfig) -> PulseSchedule {
    coupled_rotation(phi, -1.0, cfg)
}

/// 1-controlled `σ_z`.
pub fn schedule_c1u2(cfg: &NmrConfig) -> PulseSchedule {
    let quarter = 1.0 / (4.0 * cfg.j_hz);
    PulseSchedule::from_ops(
        vec![
            PulseOp::rot(Spin::Work, Axis::PlusY, PI),
            PulseOp::free(quarter),
            PulseOp::rot(Spin::Both, Axis::PlusX, PI),
            PulseOp::free(quarter),
            PulseOp::rot(Spin::Both, Axis::MinusX, PI),
            PulseOp::rot(Spin::Work, Axis::MinusY, FRAC_PI_2),
            PulseOp::rot(Spin::Work, Axis::PlusX, FRAC_PI_2),
            PulseOp::rot(Spin::Work, Axis::MinusY, FRAC_PI_2),
            PulseOp::rot(Spin::Ancilla, Axis::PlusY, FRAC_PI_2),
            PulseOp::rot(Spin::Ancilla, Axis::PlusX, FRAC_PI_2),
            PulseOp::rot(Spin::Ancilla, Axis::MinusY, FRAC_PI_2),
        ],
        *cfg,
    )
}

/// Hadamard on the ancilla: `[π/2]_y^a → [π]_{−x}^a`.
pub fn schedule_hadamard(cfg: &NmrConfig) -> PulseSchedule {
    PulseSchedule::from_ops(
        vec![
            PulseOp::rot(Spin::Ancilla, Axis::PlusY, FRAC_PI_2),
            PulseOp::rot(Spin::Ancilla, Axis::MinusX, PI),
        ],
        *cfg,
    )
}

pub fn compile(schedule: &PulseSchedule) -> Mat4 {
    schedule.ops.iter().fold(Mat4::identity(), |acc, op| {
        op.propagator(&schedule.config) * acc
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyReport {
    pub equal_up_to_global_phase: bool,
    /// `‖compile(schedule) − e^{iθ}·target‖_max` at the fitted phase.
    pub residual: f64,
    /// `θ = arg tr(target†·compile(schedule))`, in `(−π, π]`.
    pub fitted_phase: f64,
    /// Residual after also absorbing single-qubit z phases on the left.
    pub local_phase_residual: f64,
}

pub fn verify_against(schedule: &PulseSchedule, target: &Mat4) -> VerifyReport {
    let u = compile(schedule);
    let overlap = (target.dagger() * u).trace();
    let fitted_phase = if overlap.norm() > 0.0 {
        overlap.arg()
    } else {
        0.0
    };
    let residual = max_abs_diff(&u, &target.scale(Complex::from_polar(1.0, fitted_phase)));
    VerifyReport {
        equal_up_to_global_phase: residual < VERIFY_TOL,
        residual,
        fitted_phase,
        local_phase_residual: local_phase_residual(&u, target).min(residual),
    }
}

/// Fits `P = diag(e^{i(g + b·z_a + c·z_e)})` to the diagonal of `u·target†`
/// and returns `‖u − P·target‖_max`.
fn local_phase_residual(u: &Mat4, target: &Mat4) -> f64 {
    let m = *u * target.dagger();
    let reference = m.entries[0][0];
    if reference.norm() < 1e-6 {
        return f64::INFINITY;
    }
    let za = [1.0, 1.0, -1.0, -1.0];
    let ze = [1.0, -1.0, 1.0, -1.0];
    let rel: [f64; 4] = std::array::from_fn(|k| (m.entries[k][k] * reference.conj()).arg());
    let g = reference.arg() + rel.iter().sum::<f64>() / 4.0;
    let b = (0..4).map(|k| za[k] * rel[k]).sum::<f64>() / 4.0;
    let c = (0..4).map(|k| ze[k] * rel[k]).sum::<f64>() / 4.0;
    let p = Mat4::from_diagonal(std::array::from_fn(|k| {
        Complex::from_polar(1.0, g + b * za[k] + c * ze[k])
    }));
    max_abs_diff(u, &(p * *target))
}

/// Pulse schedule per circuit gate, in circuit order.
pub type Program = Vec<(GateLabel, PulseSchedule)>;

pub fn pt_program(p: &PtParams, t: f64, cfg: &NmrConfig) -> Program {
    vec![
        (GateLabel::V, schedule_v(pt_model::phi_v(p, t), cfg)),
        (GateLabel::C0U1, schedule_c0u1(pt_model::phi_u1(p, t), cfg)),
        (GateLabel::C1U2, schedule_c1u2(cfg)),
        (GateLabel::HadamardAncilla, schedule_hadamard(cfg)),
    ]
}

/// Program for the Hermitian comparison circuit. `Ũ = U₁(−θ)` with
/// `θ = s cos α·t`, so both controlled rotations reuse the coupled skeleton.
pub fn hermitian_program(p: &PtParams, t: f64, cfg: &NmrConfig) -> Program {
    let phi = pt_model::phi_v(p, t);
    let theta = circuit::hermitian_angle(p, t);
    vec![
        (GateLabel::V, schedule_v(phi, cfg)),
        (GateLabel::C0U1, schedule_c0u1(-theta, cfg)),
        (GateLabel::C1U2, schedule_c1_rotation(-theta, cfg)),
        (GateLabel::VDagger, schedule_v(-phi, cfg)),
    ]
}

/// All schedules of a program concatenated.
pub fn flatten(program: &Program, cfg: &NmrConfig) -> PulseSchedule {
    program
        .iter()
        .fold(PulseSchedule::new(*cfg), |acc, (_, s)| acc.then(s))
}

fn program_duration(program: &Program) -> f64 {
    program.iter().map(|(_, s)| s.total_duration()).sum()
}

/// Wall-clock time `t̃` of the PT program for evolution time `t`.
pub fn total_time_pt(p: &PtParams, t: f64, cfg: &NmrConfig) -> f64 {
    program_duration(&pt_program(p, t, cfg))
}

pub fn total_time_hermitian(p: &PtParams, t: f64, cfg: &NmrConfig) -> f64 {
    program_duration(&hermitian_program(p, t, cfg))
}

/// Applies the compiled program to `|0⟩ₐ|0⟩ₑ` and post-selects the ancilla.
pub fn simulate_compiled(program: &Program, cfg: &NmrConfig) -> Result<PostSelection> {
    let u = compile(&flatten(program, cfg));
    circuit::post_select_ancilla0(&TwoQubitState::ground().apply(&u))
}

/// Gate each schedule of [`pt_program`] is meant to realize.
pub fn pt_targets(p: &PtParams, t: f64) -> Result<Vec<(GateLabel, Mat4)>> {
    Ok(vec![
        (
            GateLabel::V,
            tensor(&gate_v(pt_model::phi_v(p, t)), &Gate2::identity()),
        ),
        (
            GateLabel::C0U1,
            controlled(&gate_u1(pt_model::phi_u1(p, t)), 0)?,
        ),
        (GateLabel::C1U2, controlled(&gate_u2(), 1)?),
        (
            GateLabel::HadamardAncilla,
            tensor(&gate_hadamard(), &Gate2::identity()),
        ),
    ])
}

/// Whether a gate's schedule must match at the unitary level (hard tier) or
/// only through post-selected populations.
pub fn is_hard_tier(label: GateLabel) -> bool {
    matches!(
        label,
        GateLabel::V | GateLabel::HadamardAncilla | GateLabel::VDagger
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConventionEntry {
    pub label: GateLabel,
    pub hard_tier: bool,
    pub report: VerifyReport,
}

/// Unitary-level comparison of every compiled schedule with its gate, plus the
/// end-to-end post-selected population check.
#[derive(Debug, Clone, PartialEq)]
pub struct ConventionReport {
    pub entries: Vec<ConventionEntry>,
    /// `max_k | |a_k^pulse|² − |a_k^circuit|² |` over the post-selected work qubit.
    pub population_diff: f64,
}

pub const POPULATION_TOL: f64 = 1e-6;

impl ConventionReport {
    pub fn hard_tier_ok(&self) -> bool {
        self.entries
            .iter()
            .filter(|e| e.hard_tier)
            .all(|e| e.report.equal_up_to_global_phase)
    }

    pub fn end_to_end_ok(&self) -> bool {
        self.population_diff < POPULATION_TOL
    }
}

impl fmt::Display for ConventionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(
                f,
                "# verify {} tier={} equal_up_to_global_phase={} residual={} fitted_phase={} local_phase_residual={}",
                e.label.as_str(),
                if e.hard_tier { "hard" } else { "end-to-end" },
                e.report.equal_up_to_global_phase,
                fmt_num(e.report.residual),
                fmt_num(e.report.fitted_phase),
                fmt_num(e.report.local_phase_residual),
            )?;
        }
        writeln!(
            f,
            "# end-to-end population_diff={} ok={}",
            fmt_num(self.population_diff),
            self.end_to_end_ok()
        )
    }
}

pub fn convention_report(p: &PtParams, t: f64, cfg: &NmrConfig) -> Result<ConventionReport> {
    let program = pt_program(p, t, cfg);
    let targets = pt_targets(p, t)?;
    let entries = program
        .iter()
        .zip(&targets)
        .map(|((label, schedule), (_, target))| ConventionEntry {
            label: *label,
            hard_tier: is_hard_tier(*label),
            report: verify_against(schedule, target),
        })
        .collect();
    let pulsed = simulate_compiled(&program, cfg)?;
    let exact = circuit::simulate_pt(p, t)?;
    Ok(ConventionReport {
        entries,
        population_diff: population_diff(&pulsed, &exact),
    })
}

pub fn population_diff(a: &PostSelection, b: &PostSelection) -> f64 {
    a.normalized_work_state
        .iter()
        .zip(&b.normalized_work_state)
        .map(|(x, y)| (x.norm_sqr() - y.norm_sqr()).abs())
        .fold(0.0, f64::max)
}
