use crate::basis::{BasisState, CavityBasis, EXCITED};
use crate::waveform::WaveformSpec;
use crate::CavityError;
use cpx_quantum::{c64, cis, ComplexMatrix, C64};
use serde::{Deserialize, Serialize};

/// Three atoms in a two-mode cavity. Rates are in units of Ω₁.
///
/// Atom k couples |1⟩ ↔ |e⟩ through a laser (Ωₖ, εₖ), |2⟩ ↔ |e⟩ through mode a
/// and |3⟩ ↔ |e⟩ through mode b. Atom 1 is driven with phase α(t), atoms 2
/// and 3 with β(t).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CavityModel {
    pub lambda_a: [f64; 3],
    pub lambda_b: [f64; 3],
    pub zeta_a: [f64; 3],
    pub zeta_b: [f64; 3],
    pub omega: [f64; 3],
    pub eps: [f64; 3],
    pub photon_cap: usize,
}

/// Ω₂/Ω₁ that makes every effective pulse a θₙ = π/4 pulse.
pub const OMEGA_RATIO: f64 = 1.0 - std::f64::consts::FRAC_1_SQRT_2;

impl Default for CavityModel {
    fn default() -> Self {
        CavityModel::symmetric(1.0, OMEGA_RATIO, 30.0)
    }
}

impl CavityModel {
    /// Equal cavity couplings λ for every atom and mode, Ω₃ = Ω₂.
    pub fn symmetric(omega1: f64, omega2: f64, lambda: f64) -> Self {
        CavityModel {
            lambda_a: [lambda; 3],
            lambda_b: [lambda; 3],
            zeta_a: [0.0; 3],
            zeta_b: [0.0; 3],
            omega: [omega1, omega2, omega2],
            eps: [0.0; 3],
            photon_cap: 1,
        }
    }

    /// Sets ε₁ on atom 1 and ε₂ on atoms 2 and 3.
    pub fn with_deviations(mut self, eps1: f64, eps2: f64) -> Self {
        self.eps = [eps1, eps2, eps2];
        self
    }

    /// Sets the same cavity-coupling deviations on every atom.
    pub fn with_cavity_deviations(mut self, zeta_a: f64, zeta_b: f64) -> Self {
        self.zeta_a = [zeta_a; 3];
        self.zeta_b = [zeta_b; 3];
        self
    }

    pub fn basis(&self) -> CavityBasis {
        CavityBasis::new(self.photon_cap)
    }

    pub fn validate(&self) -> Result<(), CavityError> {
        if self.photon_cap < 1 {
            return Err(CavityError::InvalidModel(
                "photon_cap must be at least 1".into(),
            ));
        }
        let all = self
            .lambda_a
            .iter()
            .chain(&self.lambda_b)
            .chain(&self.zeta_a)
            .chain(&self.zeta_b);
        if all
            .chain(&self.omega)
            .chain(&self.eps)
            .any(|x| !x.is_finite())
        {
            return Err(CavityError::InvalidModel(
                "parameters must be finite".into(),
            ));
        }
        if self
            .omega
            .iter()
            .chain(&self.lambda_a)
            .chain(&self.lambda_b)
            .any(|&x| x < 0.0)
        {
            return Err(CavityError::InvalidModel(
                "couplings must be non-negative".into(),
            ));
        }
        Ok(())
    }

    /// Duration of one pulse: a complete effective transfer, π/√(Ω₁²/3 + 2Ω₂²/3).
    pub fn pulse_duration(&self) -> f64 {
        effective_duration(self.omega[0], self.omega[1])
    }

    /// Largest coupling or rate, used to bound the integration step.
    pub fn max_rate(&self) -> f64 {
        let lam = self
            .lambda_a
            .iter()
            .zip(&self.zeta_a)
            .chain(self.lambda_b.iter().zip(&self.zeta_b))
            .map(|(l, z)| l * (1.0 + z).abs())
            .fold(0.0, f64::max);
        let om = self
            .omega
            .iter()
            .zip(&self.eps)
            .map(|(o, e)| o * (1.0 + e).abs())
            .fold(0.0, f64::max);
        lam.max(om)
    }

    /// Splits H into pieces: constant cavity part, and laser raising parts
    /// Σ (1+εₖ)Ωₖ|e⟩ₖ⟨1| for atom 1 and for atoms 2, 3, to be multiplied by e^{iα}, e^{iβ}.
    pub fn parts(&self) -> HamiltonianParts {
        let basis = self.basis();
        let mut cavity = Vec::new();
        let mut laser_a = Vec::new();
        let mut laser_b = Vec::new();
        for (j, s) in basis.states().enumerate() {
            for k in 0..3 {
                let raise = |s: BasisState| {
                    let mut t = s;
                    t.atoms[k] = EXCITED;
                    t
                };
                match s.atoms[k] {
                    0 => {
                        let v = (1.0 + self.eps[k]) * self.omega[k];
                        let entry = (basis.index(raise(s)), j, v);
                        if k == 0 {
                            laser_a.push(entry);
                        } else {
                            laser_b.push(entry);
                        }
                    }
                    1 if s.na > 0 => {
                        let mut t = raise(s);
                        t.na -= 1;
                        let v = self.lambda_a[k] * (1.0 + self.zeta_a[k]) * (s.na as f64).sqrt();
                        cavity.push((basis.index(t), j, c64(v, 0.0)));
                    }
                    2 if s.nb > 0 => {
                        let mut t = raise(s);
                        t.nb -= 1;
                        let v = self.lambda_b[k] * (1.0 + self.zeta_b[k]) * (s.nb as f64).sqrt();
                        cavity.push((basis.index(t), j, c64(v, 0.0)));
                    }
                    _ => {}
                }
            }
        }
        let mut hermitian = cavity.clone();
        hermitian.extend(cavity.iter().map(|&(i, j, v)| (j, i, v.conj())));
        HamiltonianParts {
            dim: basis.dim(),
            cavity: hermitian,
            laser_a,
            laser_b,
        }
    }

    /// Dense H for fixed laser phases.
    pub fn hamiltonian(&self, alpha: f64, beta: f64) -> ComplexMatrix {
        self.parts().dense(alpha, beta)
    }

    /// Dense H(t) with the phases of the waveform at time t.
    pub fn hamiltonian_at(&self, t: f64, w: &WaveformSpec) -> Result<ComplexMatrix, CavityError> {
        let (a, b) = w.phases(t)?;
        Ok(self.hamiltonian(a, b))
    }
}

pub fn effective_duration(omega1: f64, omega2: f64) -> f64 {
    std::f64::consts::PI / (omega1 * omega1 / 3.0 + 2.0 * omega2 * omega2 / 3.0).sqrt()
}

/// Sparse pieces of the atom-cavity Hamiltonian, stored as (row, col, value).
#[derive(Debug, Clone)]
pub struct HamiltonianParts {
    pub dim: usize,
    /// Hermitian cavity couplings (both triangles).
    pub cavity: Vec<(usize, usize, C64)>,
    /// Raising entries |e⟩⟨1| of atom 1; H gets e^{iα}·v plus the conjugate.
    pub laser_a: Vec<(usize, usize, f64)>,
    /// Raising entries of atoms 2 and 3 with phase β.
    pub laser_b: Vec<(usize, usize, f64)>,
}

impl HamiltonianParts {
    /// All entries of H for the given phases.
    pub fn entries(&self, alpha: f64, beta: f64) -> Vec<(usize, usize, C64)> {
        let mut out = self.cavity.clone();
        for (list, phi) in [(&self.laser_a, alpha), (&self.laser_b, beta)] {
            let p = cis(phi);
            for &(i, j, v) in list {
                out.push((i, j, p * v));
                out.push((j, i, p.conj() * v));
            }
        }
        out
    }

    pub fn dense(&self, alpha: f64, beta: f64) -> ComplexMatrix {
        let mut h = ComplexMatrix::zeros(self.dim, self.dim);
        for (i, j, v) in self.entries(alpha, beta) {
            h[(i, j)] += v;
        }
        h
    }

    /// Keeps only entries inside `keep` (sorted full-space indices), renumbered.
    pub fn restrict(&self, keep: &[usize]) -> HamiltonianParts {
        let mut map = vec![usize::MAX; self.dim];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let inside = |i: usize, j: usize| map[i] != usize::MAX && map[j] != usize::MAX;
        HamiltonianParts {
            dim: keep.len(),
            cavity: self
                .cavity
                .iter()
                .filter(|e| inside(e.0, e.1))
                .map(|&(i, j, v)| (map[i], map[j], v))
                .collect(),
            laser_a: self
                .laser_a
                .iter()
                .filter(|e| inside(e.0, e.1))
                .map(|&(i, j, v)| (map[i], map[j], v))
                .collect(),
            laser_b: self
                .laser_b
                .iter()
                .filter(|e| inside(e.0, e.1))
                .map(|&(i, j, v)| (map[i], map[j], v))
                .collect(),
        }
    }
}

/// Dense diagonal N̂_e.
pub fn excitation_operator(basis: &CavityBasis) -> ComplexMatrix {
    let n = basis.excitation_numbers();
    ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n.len(),
        n.iter().map(|&x| c64(x as f64, 0.0)),
    ))
}
