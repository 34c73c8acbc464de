use crate::{apply_lambda_pulse, CompositeSequence, DeviationPair, PulseError};
use cpx_quantum::{c64, C64};
use serde::{Deserialize, Serialize};

/// Qubit Bloch vector scaled by the population left in {|g⟩, |r⟩}; points
/// inside the unit sphere signal leakage into |e⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochPoint {
    pub time: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochPoint {
    pub fn radius(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// Bloch point of a three-level state. Writing the qubit part as
/// cosϑ′(cosθ̃, sinθ̃ e^{iϕ′}) the point is cos²ϑ′ (sin2θ̃ cosϕ′, sin2θ̃ sinϕ′, cos2θ̃),
/// which is (2 Re g*r, 2 Im g*r, |g|² − |r|²). A pure |e⟩ state maps to the origin.
pub fn bloch_point(psi: &[C64; 3], time: f64) -> BlochPoint {
    let gr = psi[0].conj() * psi[1];
    BlochPoint {
        time,
        x: 2.0 * gr.re,
        y: 2.0 * gr.im,
        z: psi[0].norm_sqr() - psi[1].norm_sqr(),
    }
}

/// Samples the Bloch point along the sequence, `samples_per_pulse` evenly
/// spaced instants per pulse including both ends (shared ends emitted once).
pub fn bloch_trajectory(
    seq: &CompositeSequence,
    d: DeviationPair,
    samples_per_pulse: usize,
) -> Result<Vec<BlochPoint>, PulseError> {
    if samples_per_pulse < 2 {
        return Err(PulseError::InvalidSequence(
            "need at least 2 samples per pulse".into(),
        ));
    }
    let mut psi = [c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)];
    let mut out = vec![bloch_point(&psi, 0.0)];
    let mut t0 = 0.0;
    for p in &seq.pulses {
        let tp = p.duration();
        let steps = samples_per_pulse - 1;
        let dt = tp / steps as f64;
        for k in 1..=steps {
            apply_lambda_pulse(&mut psi, p, d, dt);
            out.push(bloch_point(&psi, t0 + k as f64 * dt));
        }
        t0 += tp;
    }
    Ok(out)
}
