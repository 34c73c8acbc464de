//! Constant pulses on a three-level Λ system and their composition.
//!
//! Basis ordering is `{|g⟩, |r⟩, |e⟩}` (indices 0, 1, 2). Frequencies are in
//! units of the first pulse's Ω₁ and times in units of 1/Ω₁.

mod bloch;
mod lambda;

pub use bloch::{bloch_point, bloch_trajectory, BlochPoint};
pub use lambda::{apply_lambda_pulse, lambda_propagator};

use cpx_quantum::{c64, cis, ComplexMatrix, C64};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PulseError {
    #[error("invalid pulse: {0}")]
    InvalidPulse(String),
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
}

/// Wraps a phase into `[0, 2π)`.
pub fn wrap_phase(x: f64) -> f64 {
    let w = x.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// One constant pulse. The duration and the derived angles are computed,
/// never stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseParams {
    pub omega1: f64,
    pub omega2: f64,
    #[serde(default)]
    pub delta: f64,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
}

impl PulseParams {
    /// Builds a pulse, wrapping the phases into `[0, 2π)`.
    pub fn new(
        omega1: f64,
        omega2: f64,
        delta: f64,
        alpha: f64,
        beta: f64,
    ) -> Result<Self, PulseError> {
        let p = PulseParams {
            omega1,
            omega2,
            delta,
            alpha: wrap_phase(alpha),
            beta: wrap_phase(beta),
        };
        p.validate()?;
        Ok(p)
    }

    /// Resonant pulse with Ω₁ = 1 whose transfer angle is `theta_n`
    /// (Ω₂ = tan(θₙ/2)).
    pub fn resonant_with_angle(theta_n: f64, alpha: f64, beta: f64) -> Result<Self, PulseError> {
        if !(0.0..=FRAC_PI_2).contains(&theta_n) {
            return Err(PulseError::InvalidPulse(format!(
                "pulse angle {theta_n} outside [0, π/2]"
            )));
        }
        Self::new(1.0, (theta_n / 2.0).tan(), 0.0, alpha, beta)
    }

    /// The designer's building block: resonant pulse with θₙ = π/4,
    /// i.e. Ω₁ = 1, Ω₂ = √2 − 1.
    pub fn quarter(alpha: f64, beta: f64) -> Self {
        PulseParams {
            omega1: 1.0,
            omega2: std::f64::consts::SQRT_2 - 1.0,
            delta: 0.0,
            alpha: wrap_phase(alpha),
            beta: wrap_phase(beta),
        }
    }

    pub fn validate(&self) -> Result<(), PulseError> {
        let all = [self.omega1, self.omega2, self.delta, self.alpha, self.beta];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(PulseError::InvalidPulse("non-finite parameter".into()));
        }
        if self.omega1 < 0.0 || self.omega2 < 0.0 {
            return Err(PulseError::InvalidPulse(
                "couplings must be non-negative".into(),
            ));
        }
        if self.generalized_rabi() == 0.0 {
            return Err(PulseError::InvalidPulse(
                "zero couplings and zero detuning give an infinite duration".into(),
            ));
        }
        Ok(())
    }

    /// `√(Δ² + 4(Ω₁² + Ω₂²))`.
    pub fn generalized_rabi(&self) -> f64 {
        (self.delta * self.delta + 4.0 * (self.omega1 * self.omega1 + self.omega2 * self.omega2))
            .sqrt()
    }

    /// Pulse duration `T = 2π / √(Δ² + 4(Ω₁² + Ω₂²))`.
    pub fn duration(&self) -> f64 {
        TAU / self.generalized_rabi()
    }

    /// Θ = πΔ / (2√(Δ² + 4(Ω₁² + Ω₂²))).
    pub fn big_theta(&self) -> f64 {
        PI * self.delta / (2.0 * self.generalized_rabi())
    }

    /// Diagonal phase Φ of the qubit block. The 0/0 case (Δ = 0, Ω₁ = Ω₂)
    /// resolves to 0 through `atan2(0, 0)`.
    pub fn big_phi(&self) -> f64 {
        let s1 = self.omega1 * self.omega1;
        let s2 = self.omega2 * self.omega2;
        let th = self.big_theta();
        let num = (s1 - s2) * th.cos();
        let den = (s1 + s2) * th.sin();
        if num == 0.0 && den == 0.0 {
            0.0
        } else {
            num.atan2(den)
        }
    }

    /// Transfer angle θ = arcsin(2Ω₁Ω₂cosΘ / (Ω₁² + Ω₂²)).
    pub fn theta(&self) -> f64 {
        let s = self.omega1 * self.omega1 + self.omega2 * self.omega2;
        if s == 0.0 {
            return 0.0;
        }
        (2.0 * self.omega1 * self.omega2 * self.big_theta().cos() / s)
            .clamp(-1.0, 1.0)
            .asin()
    }

    /// Off-diagonal phase γ = β − α − π/2.
    pub fn gamma(&self) -> f64 {
        self.beta - self.alpha - FRAC_PI_2
    }

    /// Deviated couplings `((1+ε₁)Ω₁e^{iα}, (1+ε₂)Ω₂e^{iβ})`.
    pub fn couplings(&self, d: DeviationPair) -> (C64, C64) {
        (
            cis(self.alpha) * ((1.0 + d.eps1) * self.omega1),
            cis(self.beta) * ((1.0 + d.eps2) * self.omega2),
        )
    }
}

/// Relative deviations of the two couplings.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DeviationPair {
    pub eps1: f64,
    pub eps2: f64,
}

impl DeviationPair {
    pub const ZERO: DeviationPair = DeviationPair {
        eps1: 0.0,
        eps2: 0.0,
    };

    pub fn new(eps1: f64, eps2: f64) -> Self {
        DeviationPair { eps1, eps2 }
    }
}

/// An ordered train of pulses designed for the target angle θ, i.e. for the
/// population sin²θ in |r⟩.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositeSequence {
    pub theta_target: f64,
    pub pulses: Vec<PulseParams>,
}

impl CompositeSequence {
    pub fn new(theta_target: f64, pulses: Vec<PulseParams>) -> Result<Self, PulseError> {
        let s = CompositeSequence {
            theta_target,
            pulses,
        };
        s.validate()?;
        Ok(s)
    }

    /// θₙ = π/4 pulses with the given phases.
    pub fn from_phases(
        theta_target: f64,
        alphas: &[f64],
        betas: &[f64],
    ) -> Result<Self, PulseError> {
        if alphas.len() != betas.len() {
            return Err(PulseError::InvalidSequence(format!(
                "{} alpha phases but {} beta phases",
                alphas.len(),
                betas.len()
            )));
        }
        let pulses = alphas
            .iter()
            .zip(betas)
            .map(|(&a, &b)| PulseParams::quarter(a, b))
            .collect();
        Self::new(theta_target, pulses)
    }

    /// Single resonant pulse that reaches sin²θ directly: Ω₂ = tan(θ/2), zero phases.
    pub fn resonant(theta: f64) -> Result<Self, PulseError> {
        Self::new(
            theta,
            vec![PulseParams::resonant_with_angle(theta, 0.0, 0.0)?],
        )
    }

    pub fn validate(&self) -> Result<(), PulseError> {
        if self.pulses.is_empty() {
            return Err(PulseError::InvalidSequence("sequence has no pulses".into()));
        }
        if !self.theta_target.is_finite() || !(0.0..=FRAC_PI_2 + 1e-12).contains(&self.theta_target)
        {
            return Err(PulseError::InvalidSequence(format!(
                "target angle {} outside [0, π/2]",
                self.theta_target
            )));
        }
        for p in &self.pulses {
            p.validate()?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    /// Desired population sin²θ in |r⟩.
    pub fn target_population(&self) -> f64 {
        self.theta_target.sin().powi(2)
    }

    pub fn total_duration(&self) -> f64 {
        self.pulses.iter().map(|p| p.duration()).sum()
    }

    pub fn alphas(&self) -> Vec<f64> {
        self.pulses.iter().map(|p| p.alpha).collect()
    }

    pub fn betas(&self) -> Vec<f64> {
        self.pulses.iter().map(|p| p.beta).collect()
    }
}

/// Accumulated angles of the composite propagator's qubit block
/// `[[cosϑ e^{iφ}, sinϑ e^{-iϕ}], [-sinϑ e^{iϕ}, cosϑ e^{-iφ}]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SequenceAngles {
    pub vartheta: f64,
    pub varphi: f64,
    pub phi: f64,
}

impl SequenceAngles {
    /// The 2×2 qubit block these angles describe.
    pub fn block(&self) -> [[C64; 2]; 2] {
        let (s, c) = self.vartheta.sin_cos();
        [
            [cis(self.varphi) * c, cis(-self.phi) * s],
            [-cis(self.phi) * s, cis(-self.varphi) * c],
        ]
    }
}

/// Deviated pulse Hamiltonian in the `{g, r, e}` basis.
pub fn hamiltonian(p: &PulseParams, d: DeviationPair) -> ComplexMatrix {
    let (g1, g2) = p.couplings(d);
    let mut h = ComplexMatrix::zeros(3, 3);
    h[(2, 2)] = c64(p.delta, 0.0);
    h[(0, 2)] = g1;
    h[(2, 0)] = g1.conj();
    h[(1, 2)] = g2;
    h[(2, 1)] = g2.conj();
    h
}

/// Closed-form single-pulse propagator over one duration, up to a global phase:
/// qubit block `[[cosθ e^{iΦ}, sinθ e^{-iγ}], [-sinθ e^{iγ}, cosθ e^{-iΦ}]]`
/// and `i e^{-iΘ}` on |e⟩.
pub fn ideal_propagator(p: &PulseParams) -> ComplexMatrix {
    let (s, c) = p.theta().sin_cos();
    let phi = p.big_phi();
    let gamma = p.gamma();
    let mut u = ComplexMatrix::zeros(3, 3);
    u[(0, 0)] = cis(phi) * c;
    u[(0, 1)] = cis(-gamma) * s;
    u[(1, 0)] = -cis(gamma) * s;
    u[(1, 1)] = cis(-phi) * c;
    u[(2, 2)] = c64(0.0, 1.0) * cis(-p.big_theta());
    u
}

/// Product of the closed-form propagators together with the recursively
/// accumulated angles.
pub fn compose(seq: &CompositeSequence) -> (ComplexMatrix, SequenceAngles) {
    let mut total = ComplexMatrix::identity(3, 3);
    let mut angles: Option<SequenceAngles> = None;
    for p in &seq.pulses {
        total = ideal_propagator(p) * total;
        let (th, big_phi, gamma) = (p.theta(), p.big_phi(), p.gamma());
        angles = Some(match angles {
            None => SequenceAngles {
                vartheta: th,
                varphi: big_phi,
                phi: gamma,
            },
            Some(a) => {
                let (st, ct) = th.sin_cos();
                let (sv, cv) = a.vartheta.sin_cos();
                let diag = cis(big_phi + a.varphi) * (ct * cv) - cis(a.phi - gamma) * (st * sv);
                let off = cis(a.phi - big_phi) * (ct * sv) + cis(gamma + a.varphi) * (st * cv);
                SequenceAngles {
                    vartheta: off.norm().atan2(diag.norm()),
                    varphi: diag.arg(),
                    phi: off.arg(),
                }
            }
        });
    }
    (total, angles.expect("validated sequences are non-empty"))
}

/// Populations (P_r, P_e) without deviations: sin²ϑ_N and exactly 0.
pub fn ideal_population(seq: &CompositeSequence) -> (f64, f64) {
    let (_, a) = compose(seq);
    (a.vartheta.sin().powi(2), 0.0)
}

/// State after the sequence with deviated couplings, starting from |g⟩.
pub fn final_state(seq: &CompositeSequence, d: DeviationPair) -> [C64; 3] {
    let mut psi = [c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)];
    for p in &seq.pulses {
        apply_lambda_pulse(&mut psi, p, d, p.duration());
    }
    psi
}

/// Actual populations (P_r, P_e) with deviated couplings, starting from |g⟩.
pub fn actual_populations(seq: &CompositeSequence, d: DeviationPair) -> (f64, f64) {
    let psi = final_state(seq, d);
    (psi[1].norm_sqr(), psi[2].norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use cpx_quantum::{hermitian_expm, max_abs, phase_gauged_distance};
    use std::f64::consts::{FRAC_PI_4, SQRT_2};

    #[test]
    fn hamiltonian_examples() {
        let p = PulseParams {
            omega1: 0.0,
            omega2: 0.0,
            delta: 0.7,
            alpha: 0.0,
            beta: 0.0,
        };
        let h = hamiltonian(&p, DeviationPair::ZERO);
        let mut expect = ComplexMatrix::zeros(3, 3);
        expect[(2, 2)] = c64(0.7, 0.0);
        assert_eq!(h, expect);

        let p = PulseParams::new(1.0, 0.6, 0.0, 0.0, 0.0).unwrap();
        let h = hamiltonian(&p, DeviationPair::ZERO);
        assert_eq!(h[(0, 2)], c64(1.0, 0.0));
        assert_eq!(h[(1, 2)], c64(0.6, 0.0));
        assert!(h.iter().all(|z| z.im == 0.0));
        assert_eq!(h, h.transpose());

        let p = PulseParams::new(1.3, 0.6, 0.0, 1.0, 2.0).unwrap();
        let h = hamiltonian(&p, DeviationPair::new(0.1, 0.0));
        assert!((h[(0, 2)].norm() - 1.1 * 1.3).abs() < 1e-15);
    }

    #[test]
    fn derived_angles() {
        let p = PulseParams::new(1.0, SQRT_2 - 1.0, 0.0, 0.0, 0.0).unwrap();
        assert!((p.theta() - FRAC_PI_4).abs() < 1e-12);
        let p = PulseParams::new(1.0, 1.0, 0.0, 0.0, 0.0).unwrap();
        assert!((p.theta() - FRAC_PI_2).abs() < 1e-12);
        assert_eq!(p.big_phi(), 0.0);
        let p = PulseParams::new(1.0, 0.0, 0.0, 0.3, 0.0).unwrap();
        assert_eq!(p.theta(), 0.0);
        let u = ideal_propagator(&p);
        assert!(u[(0, 1)].norm() < 1e-15 && u[(1, 0)].norm() < 1e-15);
        assert!((u[(0, 0)] - cis(p.big_phi())).norm() < 1e-15);
        let p = PulseParams::new(0.8, 0.5, 1.7, 0.0, 0.0).unwrap();
        let expect = TAU / (1.7f64.powi(2) + 4.0 * (0.64 + 0.25)).sqrt();
        assert!((p.duration() - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn phases_are_wrapped() {
        let p = PulseParams::new(1.0, 0.5, 0.0, -0.5, 7.0).unwrap();
        assert!((p.alpha - (TAU - 0.5)).abs() < 1e-14);
        assert!((p.beta - (7.0 - TAU)).abs() < 1e-14);
        assert_eq!(wrap_phase(TAU), 0.0);
    }

    #[test]
    fn invalid_pulses_rejected() {
        assert!(PulseParams::new(-1.0, 0.5, 0.0, 0.0, 0.0).is_err());
        assert!(PulseParams::new(0.0, 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(PulseParams::new(f64::NAN, 0.5, 0.0, 0.0, 0.0).is_err());
        assert!(CompositeSequence::new(0.3, vec![]).is_err());
        assert!(CompositeSequence::from_phases(2.0, &[0.0], &[0.0]).is_err());
    }

    #[test]
    fn closed_form_matches_exponential() {
        for p in [
            PulseParams::new(1.0, 1.0, 0.0, 0.4, 1.1).unwrap(),
            PulseParams::new(1.0, 0.3, 0.9, 2.0, 5.1).unwrap(),
            PulseParams::new(0.7, 1.4, -2.3, 3.3, 0.2).unwrap(),
        ] {
            let exact =
                hermitian_expm(&hamiltonian(&p, DeviationPair::ZERO), p.duration()).unwrap();
            assert!(phase_gauged_distance(&ideal_propagator(&p), &exact) < 1e-9);
        }
    }

    #[test]
    fn single_pulse_base_case() {
        let seq = CompositeSequence::new(
            0.5,
            vec![PulseParams::new(1.0, 0.4, 0.0, 1.0, 2.0).unwrap()],
        )
        .unwrap();
        let (_, a) = compose(&seq);
        assert!((a.vartheta - seq.pulses[0].theta()).abs() < 1e-15);
    }

    #[test]
    fn two_pulse_full_transfer() {
        // α₁₂ − β₁₂ = π gives sin²ϑ₂ = 1.
        let seq =
            CompositeSequence::from_phases(FRAC_PI_2, &[0.0, -0.7], &[0.0, -0.7 + PI]).unwrap();
        let (pr, pe) = ideal_population(&seq);
        assert!((pr - 1.0).abs() < 1e-12);
        assert_eq!(pe, 0.0);
    }

    #[test]
    fn single_pulse_population_formula() {
        let p = PulseParams::new(1.0, 1.0, 0.0, 0.0, 0.0).unwrap();
        let seq = CompositeSequence::new(FRAC_PI_2, vec![p]).unwrap();
        assert!((ideal_population(&seq).0 - 1.0).abs() < 1e-12);

        let (o1, o2, delta) = (1.0, 0.6, 1.3);
        let p = PulseParams::new(o1, o2, delta, 0.0, 0.0).unwrap();
        let seq = CompositeSequence::new(0.3, vec![p]).unwrap();
        let t = p.duration();
        let expect =
            4.0 * o1 * o1 * o2 * o2 * (delta * t / 4.0).cos().powi(2) / (o1 * o1 + o2 * o2).powi(2);
        assert!((ideal_population(&seq).0 - expect).abs() < 1e-12);
        assert!((actual_populations(&seq, DeviationPair::ZERO).0 - expect).abs() < 1e-12);

        let p = PulseParams::new(1.0, 0.0, 0.4, 0.0, 0.0).unwrap();
        let seq = CompositeSequence::new(0.0, vec![p]).unwrap();
        assert_eq!(ideal_population(&seq).0, 0.0);
    }

    #[test]
    fn resonant_pulse_robust_point() {
        // P_r = 3/4 single pulse: a valley of near-zero infidelity passes
        // within 0.05 of (-0.46, 0.42), far from the origin.
        let seq = CompositeSequence::resonant(PI / 3.0).unwrap();
        let mut best = f64::INFINITY;
        for i in 0..=40 {
            for j in 0..=40 {
                let d = DeviationPair::new(-0.51 + 0.0025 * i as f64, 0.37 + 0.0025 * j as f64);
                best = best.min((actual_populations(&seq, d).0 - 0.75).abs());
            }
        }
        assert!(best < 1e-4, "min infidelity {best}");
    }

    #[test]
    fn recursion_matches_product() {
        let seq = CompositeSequence::new(
            0.4,
            vec![
                PulseParams::new(1.0, 0.3, 0.5, 0.1, 2.0).unwrap(),
                PulseParams::new(0.8, 0.9, -0.4, 4.0, 1.0).unwrap(),
                PulseParams::new(1.2, 0.2, 0.0, 3.0, 5.5).unwrap(),
            ],
        )
        .unwrap();
        let (u, a) = compose(&seq);
        assert!((a.vartheta.sin().powi(2) - u[(1, 0)].norm_sqr()).abs() < 1e-12);
        let b = a.block();
        let mut m = ComplexMatrix::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                m[(i, j)] = b[i][j];
            }
        }
        assert!(max_abs(&(m.adjoint() * &m - ComplexMatrix::identity(2, 2))) < 1e-10);
    }

    #[test]
    fn sequence_json_shape() {
        let text = r#"{"theta_target": 0.7853981633974483,
            "pulses": [{"omega1": 1.0, "omega2": 0.41421356237309503, "delta": 0.0, "alpha": 0.0, "beta": 0.0}]}"#;
        let seq: CompositeSequence = serde_json::from_str(text).unwrap();
        seq.validate().unwrap();
        assert_eq!(seq.len(), 1);
        assert!((seq.pulses[0].theta() - FRAC_PI_4).abs() < 1e-12);
    }
}
