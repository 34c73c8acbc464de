//! Master-equation evolution of the atom-cavity system.
//!
//! H conserves N̂_e and every jump operator lowers it or leaves it unchanged, so
//! a state supported on N̂_e ≤ n stays there. Integration runs on that subspace
//! (48 states for one excitation at photon cap 1) and the result is embedded
//! back into the full space.

use crate::basis::{CavityBasis, EXCITED};
use crate::model::{CavityModel, HamiltonianParts};
use crate::waveform::WaveformSpec;
use crate::CavityError;
use cpx_quantum::{c64, check_density, hermitian_expm, DensityMatrix, StateVector, C64};
use serde::{Deserialize, Serialize};

/// Dissipation rates in units of Ω₁.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct LindbladSpec {
    /// Total spontaneous emission rate of |e⟩, split equally into the three ground levels.
    pub gamma: f64,
    /// Decay rate of each cavity mode.
    pub kappa: f64,
}

impl LindbladSpec {
    pub fn validate(&self) -> Result<(), CavityError> {
        if !(self.gamma.is_finite() && self.kappa.is_finite())
            || self.gamma < 0.0
            || self.kappa < 0.0
        {
            return Err(CavityError::InvalidModel(format!(
                "rates must be finite and non-negative (gamma {}, kappa {})",
                self.gamma, self.kappa
            )));
        }
        Ok(())
    }

    pub fn is_closed(&self) -> bool {
        self.gamma == 0.0 && self.kappa == 0.0
    }
}

/// Trace drift beyond this aborts the run.
pub const TRACE_ABORT: f64 = 1e-4;

/// Default step as a fraction of 1/(fastest rate).
pub const DEFAULT_STEP_FACTOR: f64 = 0.01;
/// Largest accepted step as a fraction of 1/(fastest rate).
pub const MAX_STEP_FACTOR: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    /// Fixed RK4 step; defaults to 0.01 / fastest rate.
    pub dt: Option<f64>,
    /// Defaults to the end of the three-pulse sequence.
    pub t_final: Option<f64>,
    pub samples_per_pulse: usize,
    /// Keep the (subspace) density matrix at every sample.
    pub keep_states: bool,
    /// Integrate on the full Hilbert space instead of the excitation subspace.
    pub full_space: bool,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            dt: None,
            t_final: None,
            samples_per_pulse: 20,
            keep_states: false,
            full_space: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    /// ⟨Ψ_S|ρ|Ψ_S⟩.
    pub fidelity: f64,
    pub trace: f64,
    /// Population with some atom in |e⟩.
    pub excited: f64,
    /// Mean total photon number.
    pub photons: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    /// Exact unitary per constant-phase segment.
    ExactUnitary,
    Rk4,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub final_fidelity: f64,
    pub integrator: Integrator,
    pub dt: f64,
    pub steps: usize,
    pub subspace_dim: usize,
    #[serde(skip)]
    pub final_state: DensityMatrix,
    /// Subspace states at each sample when requested.
    #[serde(skip)]
    pub states: Vec<DensityMatrix>,
}

/// ⟨Ψ_S|ρ|Ψ_S⟩ for a density matrix on the full space of any photon cap.
pub fn singlet_fidelity(rho: &DensityMatrix) -> Result<f64, CavityError> {
    let basis = basis_for_dim(rho.nrows())?;
    Ok(cpx_quantum::fidelity_mixed(rho, &basis.singlet())?)
}

fn basis_for_dim(dim: usize) -> Result<CavityBasis, CavityError> {
    (1..=8)
        .map(CavityBasis::new)
        .find(|b| b.dim() == dim)
        .ok_or_else(|| CavityError::InvalidState(format!("dimension {dim} is not 64·(cap+1)²")))
}

/// A jump operator as (to, from, amplitude) triplets; each column has at most one entry.
type Jump = Vec<(usize, usize, f64)>;

struct Generator {
    parts: HamiltonianParts,
    jumps: Vec<Jump>,
    decay: Vec<f64>,
}

impl Generator {
    fn apply(&self, h: &[(usize, usize, C64)], rho: &DensityMatrix) -> DensityMatrix {
        let n = rho.nrows();
        let mut x = DensityMatrix::zeros(n, n);
        for &(i, j, v) in h {
            for c in 0..n {
                x[(i, c)] += v * rho[(j, c)];
            }
        }
        // −i[H, ρ] = −i(Hρ − (Hρ)†) for Hermitian ρ.
        let mut out = (&x - x.adjoint()) * c64(0.0, -1.0);
        for j in 0..n {
            for i in 0..n {
                out[(i, j)] -= rho[(i, j)] * (0.5 * (self.decay[i] + self.decay[j]));
            }
        }
        for op in &self.jumps {
            for &(bt, bf, cb) in op {
                for &(at, af, ca) in op {
                    out[(at, bt)] += rho[(af, bf)] * (ca * cb);
                }
            }
        }
        out
    }
}

fn jump_operators(basis: &CavityBasis, spec: &LindbladSpec, keep: &[usize]) -> Vec<Jump> {
    let mut map = vec![usize::MAX; basis.dim()];
    for (new, &old) in keep.iter().enumerate() {
        map[old] = new;
    }
    let mut jumps = Vec::new();
    if spec.gamma > 0.0 {
        let amp = (spec.gamma / 3.0).sqrt();
        for k in 0..3 {
            for level in 0..3 {
                let mut op = Jump::new();
                for (j, s) in basis.states().enumerate() {
                    if s.atoms[k] == EXCITED && map[j] != usize::MAX {
                        let mut t = s;
                        t.atoms[k] = level;
                        op.push((map[basis.index(t)], map[j], amp));
                    }
                }
                jumps.push(op);
            }
        }
    }
    if spec.kappa > 0.0 {
        let amp = spec.kappa.sqrt();
        for mode in 0..2 {
            let mut op = Jump::new();
            for (j, s) in basis.states().enumerate() {
                let n = if mode == 0 { s.na } else { s.nb };
                if n > 0 && map[j] != usize::MAX {
                    let mut t = s;
                    if mode == 0 {
                        t.na -= 1;
                    } else {
                        t.nb -= 1;
                    }
                    op.push((map[basis.index(t)], map[j], amp * (n as f64).sqrt()));
                }
            }
            jumps.push(op);
        }
    }
    jumps
}

struct Observables {
    singlet: StateVector,
    excited: Vec<bool>,
    photons: Vec<f64>,
}

impl Observables {
    fn sample(&self, t: f64, rho: &DensityMatrix) -> Sample {
        let n = rho.nrows();
        let (mut trace, mut excited, mut photons) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let p = rho[(i, i)].re;
            trace += p;
            if self.excited[i] {
                excited += p;
            }
            photons += p * self.photons[i];
        }
        let fidelity = self.singlet.dotc(&(rho * &self.singlet)).re;
        Sample {
            t,
            fidelity,
            trace,
            excited,
            photons,
        }
    }
}

/// Integrates ρ̇ = −i[H(t), ρ] + Σ (γ/3)𝒟[σₖˡᵉ]ρ + κ𝒟[â]ρ + κ𝒟[b̂]ρ from `rho0`.
///
/// Square waveforms without dissipation are propagated exactly, one unitary
/// per sample interval. Everything else uses fixed-step RK4 with steps aligned
/// to the pulse boundaries. ρ is re-symmetrized after every step.
pub fn lindblad_evolve(
    model: &CavityModel,
    spec: &LindbladSpec,
    w: &WaveformSpec,
    rho0: &DensityMatrix,
    opts: &EvolveOptions,
) -> Result<Trajectory, CavityError> {
    model.validate()?;
    spec.validate()?;
    w.validate()?;
    let basis = model.basis();
    let dim = basis.dim();
    if rho0.nrows() != dim || rho0.ncols() != dim {
        return Err(CavityError::InvalidState(format!(
            "ρ₀ is {}×{}, model needs {dim}",
            rho0.nrows(),
            rho0.ncols()
        )));
    }
    check_density(rho0, 1e-8, 1e-8).map_err(CavityError::InvalidState)?;
    if opts.samples_per_pulse == 0 {
        return Err(CavityError::InvalidState(
            "samples_per_pulse must be positive".into(),
        ));
    }

    let rate = model.max_rate().max(spec.gamma).max(spec.kappa);
    // Nothing happens without couplings or rates; any step is exact then.
    let rate = if rate > 0.0 { rate } else { 1.0 };
    let dt = match opts.dt {
        Some(dt) => {
            let max = MAX_STEP_FACTOR / rate;
            if !(dt > 0.0 && dt <= max) {
                return Err(CavityError::BadStep { dt, max });
            }
            dt
        }
        None => DEFAULT_STEP_FACTOR / rate,
    };
    let end = w.total_duration();
    let t_final = opts.t_final.unwrap_or(end);
    if !(0.0..=end).contains(&t_final) {
        return Err(CavityError::TimeOutOfRange {
            t: t_final,
            max: end,
        });
    }

    let ne = basis.excitation_numbers();
    let keep: Vec<usize> = if opts.full_space {
        (0..dim).collect()
    } else {
        let nmax = (0..dim)
            .filter(|&i| rho0[(i, i)].norm() > 1e-14)
            .map(|i| ne[i])
            .max()
            .unwrap_or(0);
        (0..dim).filter(|&i| ne[i] <= nmax).collect()
    };
    let n = keep.len();
    let parts = model.parts().restrict(&keep);
    let jumps = jump_operators(&basis, spec, &keep);
    let mut decay = vec![0.0; n];
    for op in &jumps {
        for &(_, from, c) in op {
            decay[from] += c * c;
        }
    }
    let gen = Generator {
        parts,
        jumps,
        decay,
    };
    let full_singlet = basis.singlet();
    let obs = Observables {
        singlet: StateVector::from_iterator(n, keep.iter().map(|&i| full_singlet[i])),
        excited: keep
            .iter()
            .map(|&i| basis.state(i).atoms.contains(&EXCITED))
            .collect(),
        photons: keep
            .iter()
            .map(|&i| (basis.state(i).na + basis.state(i).nb) as f64)
            .collect(),
    };

    let mut rho = DensityMatrix::from_fn(n, n, |i, j| rho0[(keep[i], keep[j])]);
    let mut samples = vec![obs.sample(0.0, &rho)];
    let mut states = if opts.keep_states {
        vec![rho.clone()]
    } else {
        vec![]
    };
    let exact = w.is_square() && spec.is_closed();
    let integrator = if exact {
        Integrator::ExactUnitary
    } else {
        Integrator::Rk4
    };
    let mut steps = 0usize;

    for k in 0..3 {
        let t0 = k as f64 * w.duration;
        let t1 = ((k + 1) as f64 * w.duration).min(t_final);
        if t1 <= t0 {
            break;
        }
        let seg = t1 - t0;
        let mid = w.phases(0.5 * (t0 + t1))?;
        let constant = w.is_square().then(|| gen.parts.entries(mid.0, mid.1));
        if exact {
            let m = opts.samples_per_pulse;
            let h = gen.parts.dense(mid.0, mid.1);
            let u = hermitian_expm(&h, seg / m as f64)?;
            let ud = u.adjoint();
            for s in 1..=m {
                rho = &u * &rho * &ud;
                rho = (&rho + rho.adjoint()) * c64(0.5, 0.0);
                steps += 1;
                record(
                    &obs,
                    t0 + seg * s as f64 / m as f64,
                    &rho,
                    &mut samples,
                    &mut states,
                    opts.keep_states,
                )?;
            }
            continue;
        }
        let nsteps = (seg / dt).ceil().max(1.0) as usize;
        let h = seg / nsteps as f64;
        let stride = (nsteps / opts.samples_per_pulse).max(1);
        let entries_at = |t: f64| -> Result<Vec<(usize, usize, C64)>, CavityError> {
            let (a, b) = w.phases(t)?;
            Ok(gen.parts.entries(a, b))
        };
        for s in 0..nsteps {
            let t = t0 + s as f64 * h;
            let owned;
            let (e0, e1, e2) = match &constant {
                Some(e) => (e, e, e),
                None => {
                    owned = [entries_at(t)?, entries_at(t + 0.5 * h)?, entries_at(t + h)?];
                    (&owned[0], &owned[1], &owned[2])
                }
            };
            let k1 = gen.apply(e0, &rho);
            let k2 = gen.apply(e1, &(&rho + &k1 * c64(0.5 * h, 0.0)));
            let k3 = gen.apply(e1, &(&rho + &k2 * c64(0.5 * h, 0.0)));
            let k4 = gen.apply(e2, &(&rho + &k3 * c64(h, 0.0)));
            rho += (k1 + k2 * c64(2.0, 0.0) + k3 * c64(2.0, 0.0) + k4) * c64(h / 6.0, 0.0);
            rho = (&rho + rho.adjoint()) * c64(0.5, 0.0);
            steps += 1;
            let tr: f64 = (0..n).map(|i| rho[(i, i)].re).sum();
            if (tr - 1.0).abs() > TRACE_ABORT {
                return Err(CavityError::TraceDrift {
                    time: t + h,
                    drift: tr - 1.0,
                    dt: h,
                });
            }
            if (s + 1) % stride == 0 || s + 1 == nsteps {
                record(
                    &obs,
                    t + h,
                    &rho,
                    &mut samples,
                    &mut states,
                    opts.keep_states,
                )?;
            }
        }
    }

    let final_fidelity = obs.sample(t_final, &rho).fidelity;
    let mut final_state = DensityMatrix::zeros(dim, dim);
    for (a, &i) in keep.iter().enumerate() {
        for (b, &j) in keep.iter().enumerate() {
            final_state[(i, j)] = rho[(a, b)];
        }
    }
    Ok(Trajectory {
        samples,
        final_fidelity,
        integrator,
        dt,
        steps,
        subspace_dim: n,
        final_state,
        states,
    })
}

fn record(
    obs: &Observables,
    t: f64,
    rho: &DensityMatrix,
    samples: &mut Vec<Sample>,
    states: &mut Vec<DensityMatrix>,
    keep: bool,
) -> Result<(), CavityError> {
    let s = obs.sample(t, rho);
    if (s.trace - 1.0).abs() > TRACE_ABORT {
        return Err(CavityError::TraceDrift {
            time: t,
            drift: s.trace - 1.0,
            dt: f64::NAN,
        });
    }
    samples.push(s);
    if keep {
        states.push(rho.clone());
    }
    Ok(())
}

/// Runs the three-pulse sequence from |Ψ₁⟩ with both modes empty.
pub fn evolve_from_psi1(
    model: &CavityModel,
    spec: &LindbladSpec,
    w: &WaveformSpec,
    opts: &EvolveOptions,
) -> Result<Trajectory, CavityError> {
    let rho0 = cpx_quantum::pure_density(&model.basis().psi1());
    lindblad_evolve(model, spec, w, &rho0, opts)
}
