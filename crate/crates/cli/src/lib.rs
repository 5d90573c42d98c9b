//! Experiment driver behind the `ptsym` binary.
//!
//! Each subcommand turns its arguments into plain records (see [`EvolveRecord`],
//! [`SweepRecord`], [`TomographyRecord`]) and writes them as JSON, CSV or the
//! pulse text format.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use ptsym_core::circuit::{self, GateLabel};
use ptsym_core::linalg::{fidelity, Complex, Density2};
use ptsym_core::nmr::{self, ConventionReport, NmrConfig, PulseSchedule};
use ptsym_core::pt_model::{self, PtParams};

pub const DEFAULT_OMEGA: f64 = 2.0;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or I/O; exit status 2.
    Usage(String),
    /// A hard-tier pulse verification failed; exit status 3.
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<ptsym_core::Error> for CliError {
    fn from(e: ptsym_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Parses an angle given in radians (`-0.7`) or as a multiple of π
/// (`pi`, `-pi`, `-0.4844pi`, `-31/64pi`).
pub fn parse_angle(text: &str) -> std::result::Result<f64, String> {
    let text = text.trim();
    let bad = || format!("invalid angle '{text}'");
    let value = match text.strip_suffix("pi") {
        None => text.parse::<f64>().map_err(|_| bad())?,
        Some(coef) => {
            let coef = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => match c.split_once('/') {
                    Some((num, den)) => {
                        let num: f64 = num.parse().map_err(|_| bad())?;
                        let den: f64 = den.parse().map_err(|_| bad())?;
                        if den == 0.0 {
                            return Err(bad());
                        }
                        num / den
                    }
                    None => c.parse().map_err(|_| bad())?,
                },
            };
            coef * PI
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ptsym",
    version,
    about = "PT-symmetric evolution via ancilla dilation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytic and circuit state at one instant.
    Evolve(EvolveArgs),
    /// τ, τ̃, |q| and post-selection probability over a list of α.
    Sweep(SweepArgs),
    /// Work-qubit density matrices at fractions of τ.
    Tomography(TomographyArgs),
    /// Pulse schedules and their verification report.
    Pulses(PulsesArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ScaleArgs {
    /// Coupling scale s; mutually exclusive with --omega.
    #[arg(long, conflicts_with = "omega", allow_hyphen_values = true)]
    pub s: Option<f64>,
    /// Level splitting ω = 2 s cos α, held fixed while α varies [default: 2].
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
}

impl ScaleArgs {
    pub fn params(&self, alpha: f64) -> CliResult<PtParams> {
        Ok(match self.s {
            Some(s) => PtParams::new(s, alpha)?,
            None => PtParams::with_omega(self.omega.unwrap_or(DEFAULT_OMEGA), alpha)?,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct TimeArgs {
    /// Evolution time.
    #[arg(long, conflicts_with = "t_frac_of_tau", allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// Evolution time as a fraction of the passage time τ.
    #[arg(long, allow_hyphen_values = true)]
    pub t_frac_of_tau: Option<f64>,
}

impl TimeArgs {
    fn resolve(&self, p: &PtParams, default_frac: f64) -> CliResult<f64> {
        let t = match (self.t, self.t_frac_of_tau) {
            (Some(t), _) => t,
            (None, frac) => frac.unwrap_or(default_frac) * pt_model::tau(p),
        };
        check_time(p, t)?;
        Ok(t)
    }
}

fn check_time(p: &PtParams, t: f64) -> CliResult<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(CliError::Usage(format!(
            "time must be finite and >= 0, got {t}"
        )));
    }
    if t > p.circuit_time_limit() {
        return Err(CliError::Usage(format!(
            "t = {t} exceeds pi/omega = {}; the circuit angles are defined only up to there",
            p.circuit_time_limit()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Args)]
pub struct NmrArgs {
    /// Scalar coupling J in Hz.
    #[arg(long = "j", allow_hyphen_values = true, default_value_t = nmr::DEFAULT_J_HZ)]
    pub j_hz: f64,
    /// Duration of a π/2 pulse in seconds.
    #[arg(long = "tpi2", allow_hyphen_values = true, default_value_t = nmr::DEFAULT_T_PI2)]
    pub t_pi2: f64,
}

impl NmrArgs {
    pub fn config(&self) -> CliResult<NmrConfig> {
        Ok(NmrConfig::new(self.j_hz, self.t_pi2)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub alpha: f64,
    #[command(flatten)]
    pub scale: ScaleArgs,
    #[command(flatten)]
    pub time: TimeArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Fixed ω for every α.
    #[arg(long, allow_hyphen_values = true, default_value_t = DEFAULT_OMEGA)]
    pub omega: f64,
    /// Comma-separated α list [default: the six experimental values].
    #[arg(long, value_parser = parse_angle, value_delimiter = ',', allow_hyphen_values = true)]
    pub alphas: Option<Vec<f64>>,
    #[command(flatten)]
    pub nmr: NmrArgs,
    /// Output CSV path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TomographyArgs {
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub alpha: f64,
    #[command(flatten)]
    pub scale: ScaleArgs,
    /// Comma-separated instants as fractions of τ.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [0.0, 0.5, 1.0])]
    pub points: Vec<f64>,
    /// Output JSON path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    V,
    C0u1,
    C1u2,
    H,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct PulsesArgs {
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true, default_value = "0")]
    pub alpha: f64,
    #[command(flatten)]
    pub scale: ScaleArgs,
    /// Evolution time [default: τ].
    #[command(flatten)]
    pub time: TimeArgs,
    #[arg(long, value_enum, default_value_t = Which::All)]
    pub which: Which,
    #[command(flatten)]
    pub nmr: NmrArgs,
}

/// A complex number as `[re, im]`.
pub type Pair = [f64; 2];

fn pair(z: Complex) -> Pair {
    [z.re, z.im]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolveRecord {
    pub alpha: f64,
    pub s: f64,
    pub omega: f64,
    pub t: f64,
    pub tau: f64,
    /// Normalized `e^{−iHt}|0⟩`.
    pub analytic_0_re: f64,
    pub analytic_0_im: f64,
    pub analytic_1_re: f64,
    pub analytic_1_im: f64,
    /// Normalized post-selected work state of the circuit.
    pub circuit_0_re: f64,
    pub circuit_0_im: f64,
    pub circuit_1_re: f64,
    pub circuit_1_im: f64,
    pub fidelity: f64,
    pub probability: f64,
    pub q_abs: f64,
}

pub fn evolve_record(p: &PtParams, t: f64) -> CliResult<EvolveRecord> {
    check_time(p, t)?;
    let analytic = pt_model::evolve_pt_analytic(p, t)?.normalize().amplitudes();
    let ps = circuit::simulate_pt(p, t)?;
    let sim = ps.normalized_work_state;
    let f = fidelity(&Density2::from_pure(analytic)?, &Density2::from_pure(sim)?);
    Ok(EvolveRecord {
        alpha: p.alpha(),
        s: p.s(),
        omega: p.omega(),
        t,
        tau: pt_model::tau(p),
        analytic_0_re: analytic[0].re,
        analytic_0_im: analytic[0].im,
        analytic_1_re: analytic[1].re,
        analytic_1_im: analytic[1].im,
        circuit_0_re: sim[0].re,
        circuit_0_im: sim[0].im,
        circuit_1_re: sim[1].re,
        circuit_1_im: sim[1].im,
        fidelity: f,
        probability: ps.probability,
        q_abs: pt_model::q_factor(p, t).norm(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub alpha: f64,
    pub s: f64,
    pub omega: f64,
    pub tau_pt: f64,
    pub tau_hermitian: f64,
    pub tilde_tau_pt: f64,
    pub tilde_tau_hermitian: f64,
    pub q_abs_at_tau: f64,
    pub postselect_prob_at_tau: f64,
}

pub fn sweep_record(omega: f64, alpha: f64, cfg: &NmrConfig) -> CliResult<SweepRecord> {
    let p = PtParams::with_omega(omega, alpha)?;
    let tau = pt_model::tau(&p);
    let tau0 = pt_model::tau0(&p);
    Ok(SweepRecord {
        alpha,
        s: p.s(),
        omega: p.omega(),
        tau_pt: tau,
        tau_hermitian: tau0,
        tilde_tau_pt: nmr::total_time_pt(&p, tau, cfg),
        tilde_tau_hermitian: nmr::total_time_hermitian(&p, tau0, cfg),
        q_abs_at_tau: pt_model::q_factor(&p, tau).norm(),
        postselect_prob_at_tau: circuit::simulate_pt(&p, tau)?.probability,
    })
}

/// Evaluates the sweep in parallel; rows keep the order of `alphas`.
pub fn sweep(omega: f64, alphas: &[f64], cfg: &NmrConfig) -> CliResult<Vec<SweepRecord>> {
    alphas
        .par_iter()
        .map(|&a| sweep_record(omega, a, cfg))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomographyRecord {
    pub alpha: f64,
    pub t: f64,
    /// Row-major `[re, im]` entries of the post-selected circuit state.
    pub rho_sim: [Pair; 4],
    /// Row-major `[re, im]` entries of the normalized analytic projector.
    pub rho_theory: [Pair; 4],
    pub fidelity: f64,
}

fn rows(rho: &Density2) -> [Pair; 4] {
    let r = rho.to_rows();
    [pair(r[0][0]), pair(r[0][1]), pair(r[1][0]), pair(r[1][1])]
}

pub fn tomography_record(p: &PtParams, t: f64) -> CliResult<TomographyRecord> {
    check_time(p, t)?;
    let sim = circuit::work_density_matrix(&circuit::simulate_pt(p, t)?)?;
    let theory = Density2::from_pure(pt_model::evolve_pt_analytic(p, t)?.normalize().amplitudes())?;
    Ok(TomographyRecord {
        alpha: p.alpha(),
        t,
        rho_sim: rows(&sim),
        rho_theory: rows(&theory),
        fidelity: fidelity(&sim, &theory),
    })
}

/// Schedule text and verification lines for the selected gates of the PT
/// program, and whether every required check passed.
pub fn pulses_text(
    p: &PtParams,
    t: f64,
    which: Which,
    cfg: &NmrConfig,
) -> CliResult<(String, bool)> {
    let program = nmr::pt_program(p, t, cfg);
    let report = nmr::convention_report(p, t, cfg)?;
    let selected = |label: GateLabel| match which {
        Which::All => true,
        Which::V => label == GateLabel::V,
        Which::C0u1 => label == GateLabel::C0U1,
        Which::C1u2 => label == GateLabel::C1U2,
        Which::H => label == GateLabel::HadamardAncilla,
    };

    let mut out = String::new();
    let mut total = PulseSchedule::new(*cfg);
    for (label, schedule) in program.iter().filter(|(l, _)| selected(*l)) {
        out.push_str(&format!("# gate {}\n", label.as_str()));
        let text = schedule.to_text();
        // drop the per-gate TOTAL; one TOTAL closes the whole listing
        for line in text.lines().filter(|l| !l.starts_with("TOTAL")) {
            out.push_str(line);
            out.push('\n');
        }
        total = total.then(schedule);
    }
    out.push_str(&format!("TOTAL {}\n", nmr::fmt_num(total.total_duration())));

    let entries: Vec<_> = report
        .entries
        .iter()
        .filter(|e| selected(e.label))
        .cloned()
        .collect();
    let shown = ConventionReport {
        entries,
        population_diff: report.population_diff,
    };
    let rendered = shown.to_string();
    let mut ok = shown.hard_tier_ok();
    if which == Which::All {
        out.push_str(&rendered);
        ok &= shown.end_to_end_ok();
    } else {
        for line in rendered.lines().filter(|l| l.starts_with("# verify")) {
            out.push_str(line);
            out.push('\n');
        }
    }
    Ok((out, ok))
}

fn open_output(path: &Option<PathBuf>) -> CliResult<Option<File>> {
    path.as_deref()
        .map(|p: &Path| {
            File::create(p)
                .map_err(|e| CliError::Usage(format!("cannot write '{}': {e}", p.display())))
        })
        .transpose()
}

fn write_csv<T: Serialize, W: Write>(records: &[T], sink: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(sink);
    for r in records {
        w.serialize(r).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn write_json<T: Serialize, W: Write>(value: &T, mut sink: W) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut sink, value).map_err(|e| CliError::Usage(e.to_string()))?;
    sink.write_all(b"\n")?;
    Ok(())
}

/// Executes one parsed command, writing to `stdout` unless `--out` is given.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Evolve(a) => {
            let p = a.scale.params(a.alpha)?;
            let t = a.time.resolve(&p, 0.0)?;
            let record = evolve_record(&p, t)?;
            match a.format {
                Format::Json => write_json(&record, stdout),
                Format::Csv => write_csv(&[record], stdout),
            }
        }
        Command::Sweep(a) => {
            let cfg = a.nmr.config()?;
            let alphas = a
                .alphas
                .clone()
                .unwrap_or_else(|| pt_model::sweep_alphas().to_vec());
            let records = sweep(a.omega, &alphas, &cfg)?;
            match open_output(&a.out)? {
                Some(file) => write_csv(&records, file),
                None => write_csv(&records, stdout),
            }
        }
        Command::Tomography(a) => {
            let p = a.scale.params(a.alpha)?;
            let tau = pt_model::tau(&p);
            let records = a
                .points
                .iter()
                .map(|&f| tomography_record(&p, f * tau))
                .collect::<CliResult<Vec<_>>>()?;
            match open_output(&a.out)? {
                Some(file) => write_json(&records, file),
                None => write_json(&records, stdout),
            }
        }
        Command::Pulses(a) => {
            let cfg = a.nmr.config()?;
            let p = a.scale.params(a.alpha)?;
            let t = a.time.resolve(&p, 1.0)?;
            let (text, ok) = pulses_text(&p, t, a.which, &cfg)?;
            stdout.write_all(text.as_bytes())?;
            if ok {
                Ok(())
            } else {
                Err(CliError::Verification(
                    "a compiled schedule does not match its gate".into(),
                ))
            }
        }
    }
}
