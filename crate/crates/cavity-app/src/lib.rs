//! Singlet-state preparation for three four-level atoms in a bimodal cavity,
//! driven by a three-pulse composite sequence.
//!
//! All rates and times are in units of Ω₁ (Ω₁ = 1 by default).

pub mod basis;
mod effective;
mod lindblad;
mod model;
mod scenario;
mod waveform;

pub use basis::{BasisState, CavityBasis};
pub use effective::{
    effective_couplings, effective_evolve, effective_fidelity, effective_hamiltonian,
    effective_singlet, effective_square, resonant_baseline_fidelity,
};
pub use lindblad::{
    evolve_from_psi1, lindblad_evolve, singlet_fidelity, EvolveOptions, Integrator, LindbladSpec,
    Sample, Trajectory, DEFAULT_STEP_FACTOR, MAX_STEP_FACTOR, TRACE_ABORT,
};
pub use model::{
    effective_duration, excitation_operator, CavityModel, HamiltonianParts, OMEGA_RATIO,
};
pub use scenario::{ScanConfig, ScanModel, Scenario, WaveformConfig};
pub use waveform::{waveform, WaveformSpec, SINGLET_ALPHAS, SINGLET_BETAS};

use cpx_quantum::QuantumError;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CavityError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid waveform: {0}")]
    InvalidWaveform(String),
    #[error("time {t} outside the sequence [0, {max}]")]
    TimeOutOfRange { t: f64, max: f64 },
    #[error("step {dt} exceeds the stability limit {max} (0.02 / fastest rate)")]
    BadStep { dt: f64, max: f64 },
    #[error("trace drifted by {drift:.3e} at t = {time} (step {dt}); reduce the step size")]
    TraceDrift { time: f64, drift: f64, dt: f64 },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}
