use crate::lindblad::{evolve_from_psi1, EvolveOptions, LindbladSpec, Trajectory};
use crate::model::CavityModel;
use crate::waveform::{WaveformSpec, SINGLET_ALPHAS, SINGLET_BETAS};
use crate::CavityError;
use serde::{Deserialize, Serialize};

/// Waveform settings of a scenario; the pulse duration defaults to the model's.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WaveformConfig {
    pub alphas: [f64; 3],
    pub betas: [f64; 3],
    pub duration: Option<f64>,
    pub chi: Option<f64>,
    pub eps_alpha: f64,
    pub eps_beta: f64,
}

impl Default for WaveformConfig {
    fn default() -> Self {
        WaveformConfig {
            alphas: SINGLET_ALPHAS,
            betas: SINGLET_BETAS,
            duration: None,
            chi: None,
            eps_alpha: 0.0,
            eps_beta: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanModel {
    Effective,
    Full,
}

/// Optional (ε₁, ε₂) scan of the final singlet fidelity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub eps1_range: [f64; 2],
    pub eps2_range: [f64; 2],
    pub resolution: usize,
    #[serde(default = "default_scan_model")]
    pub model: ScanModel,
}

fn default_scan_model() -> ScanModel {
    ScanModel::Effective
}

/// A complete simulation setup, as read from a JSON scenario file. Every
/// field has a default; the defaults describe the noiseless singlet run with
/// λ = 30 Ω₁ and square pulses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Scenario {
    pub model: CavityModel,
    pub lindblad: LindbladSpec,
    pub waveform: WaveformConfig,
    pub dt: Option<f64>,
    pub samples_per_pulse: usize,
    pub scan: Option<ScanConfig>,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            model: CavityModel::default(),
            lindblad: LindbladSpec::default(),
            waveform: WaveformConfig::default(),
            dt: None,
            samples_per_pulse: 20,
            scan: None,
        }
    }
}

impl Scenario {
    pub fn waveform_spec(&self) -> WaveformSpec {
        let w = &self.waveform;
        WaveformSpec {
            alphas: w.alphas,
            betas: w.betas,
            duration: w.duration.unwrap_or_else(|| self.model.pulse_duration()),
            chi: w.chi,
            eps_alpha: w.eps_alpha,
            eps_beta: w.eps_beta,
        }
    }

    pub fn options(&self) -> EvolveOptions {
        EvolveOptions {
            dt: self.dt,
            samples_per_pulse: self.samples_per_pulse,
            ..Default::default()
        }
    }

    pub fn run(&self) -> Result<Trajectory, CavityError> {
        evolve_from_psi1(
            &self.model,
            &self.lindblad,
            &self.waveform_spec(),
            &self.options(),
        )
    }
}
