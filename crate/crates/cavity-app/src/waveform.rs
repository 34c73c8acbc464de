use crate::CavityError;
use serde::{Deserialize, Serialize};

/// Three-pulse phases that prepare the singlet with θₙ = π/4 effective pulses.
pub const SINGLET_ALPHAS: [f64; 3] = [0.0, 2.5382, 4.9009];
pub const SINGLET_BETAS: [f64; 3] = [5.6372, 0.8226, 5.9370];

/// Phase waveform of a three-pulse sequence of length 3T.
///
/// With `chi = None` the phases switch instantly at T and 2T. Otherwise each
/// switch is a logistic edge of sharpness χ centred on the switch time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveformSpec {
    pub alphas: [f64; 3],
    pub betas: [f64; 3],
    /// Duration T of one pulse.
    pub duration: f64,
    #[serde(default)]
    pub chi: Option<f64>,
    /// Relative phase-shift errors: the applied phase is (1 + ε′)·phase.
    #[serde(default)]
    pub eps_alpha: f64,
    #[serde(default)]
    pub eps_beta: f64,
}

impl WaveformSpec {
    pub fn square(alphas: [f64; 3], betas: [f64; 3], duration: f64) -> Self {
        WaveformSpec {
            alphas,
            betas,
            duration,
            chi: None,
            eps_alpha: 0.0,
            eps_beta: 0.0,
        }
    }

    pub fn sigmoid(alphas: [f64; 3], betas: [f64; 3], duration: f64, chi: f64) -> Self {
        WaveformSpec {
            chi: Some(chi),
            ..Self::square(alphas, betas, duration)
        }
    }

    pub fn with_phase_errors(mut self, eps_alpha: f64, eps_beta: f64) -> Self {
        self.eps_alpha = eps_alpha;
        self.eps_beta = eps_beta;
        self
    }

    pub fn total_duration(&self) -> f64 {
        3.0 * self.duration
    }

    pub fn is_square(&self) -> bool {
        self.chi.is_none()
    }

    pub fn validate(&self) -> Result<(), CavityError> {
        if !self.duration.is_finite() || self.duration <= 0.0 {
            return Err(CavityError::InvalidWaveform(format!(
                "duration {} must be positive",
                self.duration
            )));
        }
        if let Some(chi) = self.chi {
            if !chi.is_finite() || chi <= 0.0 {
                return Err(CavityError::InvalidWaveform(format!(
                    "chi {chi} must be positive"
                )));
            }
        }
        let all = self
            .alphas
            .iter()
            .chain(&self.betas)
            .chain([&self.eps_alpha, &self.eps_beta]);
        if all.into_iter().any(|x| !x.is_finite()) {
            return Err(CavityError::InvalidWaveform("phases must be finite".into()));
        }
        Ok(())
    }

    fn shape(&self, p: &[f64; 3], t: f64) -> f64 {
        let t0 = self.duration;
        match self.chi {
            None => {
                let k = ((t / t0).floor() as usize).min(2);
                p[k]
            }
            Some(chi) => {
                if t <= 1.5 * t0 {
                    p[1] - (p[1] - p[0]) / (1.0 + (chi * (t - t0)).exp())
                } else {
                    p[2] - (p[2] - p[1]) / (1.0 + (chi * (t - 2.0 * t0)).exp())
                }
            }
        }
    }

    /// Applied phases (α(t), β(t)) including the phase-shift errors.
    pub fn phases(&self, t: f64) -> Result<(f64, f64), CavityError> {
        let end = self.total_duration();
        if !(t >= -1e-12 * end && t <= end * (1.0 + 1e-12)) {
            return Err(CavityError::TimeOutOfRange { t, max: end });
        }
        let t = t.clamp(0.0, end);
        Ok((
            (1.0 + self.eps_alpha) * self.shape(&self.alphas, t),
            (1.0 + self.eps_beta) * self.shape(&self.betas, t),
        ))
    }
}

/// Phases of `w` at time `t`.
pub fn waveform(w: &WaveformSpec, t: f64) -> Result<(f64, f64), CavityError> {
    w.phases(t)
}
