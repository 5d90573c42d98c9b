//! Simulation of a PT-symmetric two-level Hamiltonian through a unitary
//! two-qubit circuit with ancilla post-selection.
//!
//! The crate is split along the physics pipeline:
//!
//! * [`linalg`]: fixed-size complex matrices, matrix exponentials, density
//!   matrices and distance metrics.
//! * [`pt_model`]: closed forms for the Hamiltonian, its evolution, the
//!   brachistochrone times and the circuit angles.
//! * [`circuit`]: the dilation circuit, its Hermitian counterpart and
//!   post-selection on the ancilla.
//! * [`nmr`]: pulse sequences realizing the circuit on a J-coupled spin pair,
//!   their timing and verification.
//!
//! Units: ħ = 1, so `s` is an angular frequency and times are in the inverse
//! unit. The NMR layer works in SI seconds and Hz.

pub mod circuit;
pub mod error;
pub mod linalg;
pub mod nmr;
pub mod pt_model;

pub use error::{Error, Result};
pub use linalg::{Complex, Density2, Gate2, Mat4, TwoQubitState};
pub use pt_model::PtParams;
