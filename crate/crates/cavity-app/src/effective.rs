//! Three-level effective model in the basis {|Ψ₁⟩, |Ψ₂⟩, |Ψ₃⟩}, valid when the
//! cavity couplings dominate the laser couplings. |Ψ₃⟩ is the bright excited
//! state and plays the role of |e⟩ in the single Λ system.

use crate::model::effective_duration;
use crate::waveform::WaveformSpec;
use crate::CavityError;
use cpx_quantum::{c64, cis, hermitian_expm, ComplexMatrix, StateVector};

/// Effective couplings (√3/3)Ω₁ and (√6/3)Ω₂.
pub fn effective_couplings(omega1: f64, omega2: f64) -> (f64, f64) {
    (3f64.sqrt() / 3.0 * omega1, 6f64.sqrt() / 3.0 * omega2)
}

/// H′ = (√3/3)(1+ε₁)Ω₁e^{iα}|Ψ₁⟩⟨Ψ₃| + (√6/3)(1+ε₂)Ω₂e^{iβ}|Ψ₂⟩⟨Ψ₃| + h.c.
pub fn effective_hamiltonian(
    omega1: f64,
    omega2: f64,
    eps1: f64,
    eps2: f64,
    alpha: f64,
    beta: f64,
) -> ComplexMatrix {
    let (g1, g2) = effective_couplings(omega1, omega2);
    let mut h = ComplexMatrix::zeros(3, 3);
    h[(0, 2)] = cis(alpha) * ((1.0 + eps1) * g1);
    h[(1, 2)] = cis(beta) * ((1.0 + eps2) * g2);
    h[(2, 0)] = h[(0, 2)].conj();
    h[(2, 1)] = h[(1, 2)].conj();
    h
}

/// The singlet in the effective basis: |Ψ₁⟩/√3 + √(2/3)|Ψ₂⟩.
pub fn effective_singlet() -> StateVector {
    StateVector::from_vec(vec![
        c64(1.0 / 3f64.sqrt(), 0.0),
        c64((2.0f64 / 3.0).sqrt(), 0.0),
        c64(0.0, 0.0),
    ])
}

/// Evolves |Ψ₁⟩ through the waveform. Square waveforms use one exact
/// exponential per pulse; smooth ones use midpoint exponentials with a step
/// resolving both the couplings and the edge width.
pub fn effective_evolve(
    omega1: f64,
    omega2: f64,
    eps1: f64,
    eps2: f64,
    w: &WaveformSpec,
) -> Result<StateVector, CavityError> {
    w.validate()?;
    let mut psi = StateVector::from_vec(vec![c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
    let t_pulse = w.duration;
    let expm = |a: f64, b: f64, dt: f64| {
        hermitian_expm(&effective_hamiltonian(omega1, omega2, eps1, eps2, a, b), dt)
            .map_err(CavityError::from)
    };
    match w.chi {
        None => {
            for k in 0..3 {
                let (a, b) = w.phases((k as f64 + 0.5) * t_pulse)?;
                psi = expm(a, b, t_pulse)? * psi;
            }
        }
        Some(chi) => {
            let dt_max = (0.01f64).min(0.1 / chi);
            let steps = (w.total_duration() / dt_max).ceil() as usize;
            let dt = w.total_duration() / steps as f64;
            for i in 0..steps {
                let (a, b) = w.phases((i as f64 + 0.5) * dt)?;
                psi = expm(a, b, dt)? * psi;
            }
        }
    }
    Ok(psi)
}

/// Singlet fidelity of the effective model after a three-pulse sequence.
pub fn effective_fidelity(
    omega1: f64,
    omega2: f64,
    eps1: f64,
    eps2: f64,
    w: &WaveformSpec,
) -> Result<f64, CavityError> {
    let psi = effective_evolve(omega1, omega2, eps1, eps2, w)?;
    Ok(effective_singlet().dotc(&psi).norm_sqr())
}

/// Square three-pulse sequence with the standard duration for the given couplings.
pub fn effective_square(
    omega1: f64,
    omega2: f64,
    alphas: [f64; 3],
    betas: [f64; 3],
) -> WaveformSpec {
    WaveformSpec::square(alphas, betas, effective_duration(omega1, omega2))
}

/// Ratio of effective couplings for which one complete pulse transfers |Ψ₁⟩ to
/// the singlet: 2r/(1+r²) = √(2/3) with r > 1.
fn baseline_ratio() -> f64 {
    (3f64.sqrt() + 1.0) / 2f64.sqrt()
}

/// Single resonant pulse in the effective model reaching the singlet exactly at
/// ε = 0: effective coupling ratio (√3+1)/√2, relative phase β − α = π.
pub fn resonant_baseline_fidelity(omega1: f64, eps1: f64, eps2: f64) -> Result<f64, CavityError> {
    let (g1, _) = effective_couplings(omega1, 0.0);
    let g2 = baseline_ratio() * g1;
    let omega2 = g2 * 3.0 / 6f64.sqrt();
    let t = std::f64::consts::PI / g1.hypot(g2);
    let u = hermitian_expm(
        &effective_hamiltonian(omega1, omega2, eps1, eps2, 0.0, std::f64::consts::PI),
        t,
    )?;
    let psi = u.column(0).into_owned();
    Ok(effective_singlet().dotc(&psi).norm_sqr())
}
