use cpx_cavity::*;
use cpx_quantum::{hermitian_deviation, min_eigenvalue, pure_density, DensityMatrix, StateVector};

fn square(model: &CavityModel) -> WaveformSpec {
    WaveformSpec::square(SINGLET_ALPHAS, SINGLET_BETAS, model.pulse_duration())
}

fn run(
    model: &CavityModel,
    spec: LindbladSpec,
    w: &WaveformSpec,
    opts: EvolveOptions,
) -> Trajectory {
    evolve_from_psi1(model, &spec, w, &opts).unwrap()
}

fn rk4() -> EvolveOptions {
    EvolveOptions::default()
}

#[test]
fn noiseless_square_sequence_prepares_singlet() {
    let m = CavityModel::default();
    let t = run(&m, LindbladSpec::default(), &square(&m), rk4());
    assert_eq!(t.integrator, Integrator::ExactUnitary);
    assert_eq!(t.subspace_dim, 48);
    assert!(t.final_fidelity >= 0.997, "{}", t.final_fidelity);
    assert!((singlet_fidelity(&t.final_state).unwrap() - t.final_fidelity).abs() < 1e-12);
}

#[test]
fn exact_and_rk4_paths_agree() {
    let m = CavityModel::default().with_deviations(0.1, -0.05);
    let w = square(&m);
    let exact = run(&m, LindbladSpec::default(), &w, rk4()).final_fidelity;
    // A zero-rate dissipator forces the RK4 path without changing the physics.
    let tiny = LindbladSpec {
        gamma: 0.0,
        kappa: 1e-300,
    };
    let stepped = run(&m, tiny, &w, rk4());
    assert_eq!(stepped.integrator, Integrator::Rk4);
    assert!(
        (exact - stepped.final_fidelity).abs() < 1e-6,
        "{exact} vs {}",
        stepped.final_fidelity
    );
}

#[test]
fn halving_the_step_changes_little() {
    let m = CavityModel::default();
    let w = square(&m);
    let spec = LindbladSpec {
        gamma: 0.05,
        kappa: 0.05,
    };
    let dt = DEFAULT_STEP_FACTOR / m.max_rate();
    let a = run(
        &m,
        spec,
        &w,
        EvolveOptions {
            dt: Some(dt),
            ..rk4()
        },
    )
    .final_fidelity;
    let b = run(
        &m,
        spec,
        &w,
        EvolveOptions {
            dt: Some(dt / 2.0),
            ..rk4()
        },
    )
    .final_fidelity;
    assert!((a - b).abs() < 1e-5);
}

#[test]
fn subspace_matches_full_space() {
    let m = CavityModel::default().with_deviations(-0.1, 0.1);
    let w = square(&m);
    let opts = EvolveOptions {
        samples_per_pulse: 1,
        ..rk4()
    };
    let sub = run(&m, LindbladSpec::default(), &w, opts);
    let full = run(
        &m,
        LindbladSpec::default(),
        &w,
        EvolveOptions {
            full_space: true,
            ..opts
        },
    );
    assert_eq!(full.subspace_dim, 256);
    assert!(cpx_quantum::max_abs(&(&sub.final_state - &full.final_state)) < 1e-10);
}

#[test]
fn larger_photon_cap_agrees() {
    let m1 = CavityModel::default();
    let m2 = CavityModel {
        photon_cap: 2,
        ..CavityModel::default()
    };
    let a = run(&m1, LindbladSpec::default(), &square(&m1), rk4()).final_fidelity;
    let b = run(&m2, LindbladSpec::default(), &square(&m2), rk4()).final_fidelity;
    assert!((a - b).abs() < 1e-6);
}

#[test]
fn cavity_photon_decays_exponentially() {
    let m = CavityModel::symmetric(0.0, 0.0, 0.0);
    let basis = m.basis();
    let i = basis.index(BasisState {
        atoms: [1, 2, 2],
        na: 1,
        nb: 0,
    });
    let rho0 = pure_density(&cpx_quantum::basis_state(basis.dim(), i));
    let kappa = 0.5;
    let w = WaveformSpec::square([0.0; 3], [0.0; 3], 1.0);
    let t = lindblad_evolve(&m, &LindbladSpec { gamma: 0.0, kappa }, &w, &rho0, &rk4()).unwrap();
    for s in &t.samples {
        assert!(
            (s.photons - (-kappa * s.t).exp()).abs() < 1e-6,
            "t={} {}",
            s.t,
            s.photons
        );
    }
}

#[test]
fn effective_model_tracks_full_model() {
    let m = CavityModel::default();
    let full = run(&m, LindbladSpec::default(), &square(&m), rk4()).final_fidelity;
    let eff = effective_fidelity(1.0, OMEGA_RATIO, 0.0, 0.0, &square(&m)).unwrap();
    assert!((full - eff).abs() < 5e-3);
}

#[test]
fn one_pulse_stays_in_effective_subspace() {
    let m = CavityModel::default();
    let w = square(&m);
    let opts = EvolveOptions {
        t_final: Some(w.duration),
        samples_per_pulse: 1,
        ..rk4()
    };
    let t = run(&m, LindbladSpec::default(), &w, opts);
    let b = m.basis();
    let p = |v: &StateVector| v.dotc(&(&t.final_state * v)).re;
    let leak = 1.0 - p(&b.psi1()) - p(&b.psi2());
    assert!(leak < 1e-2, "{leak}");
}

#[test]
fn cavity_deviations_barely_matter() {
    let base = CavityModel::default();
    let f0 = run(&base, LindbladSpec::default(), &square(&base), rk4()).final_fidelity;
    let mut prev = f0;
    for z in [0.25, 0.5, 0.75, 1.0] {
        let m = base.clone().with_cavity_deviations(z, z);
        let f = run(&m, LindbladSpec::default(), &square(&m), rk4()).final_fidelity;
        assert!((f - f0).abs() < 3e-3, "ζ={z}: {f} vs {f0}");
        assert!(f >= prev - 1e-3, "ζ={z}: {f} < {prev}");
        prev = f;
    }
}

#[test]
fn dissipation_lowers_fidelity() {
    let m = CavityModel::default();
    let w = square(&m);
    let mut prev = f64::INFINITY;
    for gamma in [0.0, 0.02, 0.05, 0.1] {
        let f = run(&m, LindbladSpec { gamma, kappa: 0.02 }, &w, rk4()).final_fidelity;
        assert!(f <= prev + 1e-9, "γ={gamma}: {f} > {prev}");
        prev = f;
    }
}

#[test]
fn cavity_decay_with_coupling_errors_stays_high() {
    let m = CavityModel::default().with_deviations(0.15, 0.15);
    let f = run(
        &m,
        LindbladSpec {
            gamma: 0.0,
            kappa: 0.1,
        },
        &square(&m),
        rk4(),
    )
    .final_fidelity;
    assert!(f >= 0.99, "{f}");
}

#[test]
fn composite_beats_resonant_baseline() {
    let m = CavityModel::default().with_deviations(0.15, 0.15);
    let f = run(&m, LindbladSpec::default(), &square(&m), rk4()).final_fidelity;
    assert!(f >= 0.99);
    assert!(resonant_baseline_fidelity(1.0, 0.15, 0.15).unwrap() < 0.956);
}

#[test]
fn phase_shift_errors_are_harmful() {
    let m = CavityModel::default();
    let f0 = run(&m, LindbladSpec::default(), &square(&m), rk4()).final_fidelity;
    let w = square(&m).with_phase_errors(0.05, 0.05);
    let f = run(&m, LindbladSpec::default(), &w, rk4()).final_fidelity;
    assert!(f0 - f > 0.01, "{f0} {f}");
}

#[test]
fn smooth_edges() {
    let m = CavityModel::default();
    let t_pulse = m.pulse_duration();
    let exact = run(&m, LindbladSpec::default(), &square(&m), rk4()).final_fidelity;
    let soft = run(
        &m,
        LindbladSpec::default(),
        &WaveformSpec::sigmoid(SINGLET_ALPHAS, SINGLET_BETAS, t_pulse, 10.0),
        rk4(),
    );
    assert!(soft.final_fidelity > 0.99, "{}", soft.final_fidelity);
    let sharp = run(
        &m,
        LindbladSpec::default(),
        &WaveformSpec::sigmoid(SINGLET_ALPHAS, SINGLET_BETAS, t_pulse, 1000.0),
        rk4(),
    );
    assert!(
        (sharp.final_fidelity - exact).abs() < 2e-3,
        "{} vs {exact}",
        sharp.final_fidelity
    );
}

#[test]
fn trajectories_remain_physical() {
    let m = CavityModel::default().with_deviations(0.1, 0.1);
    let opts = EvolveOptions {
        keep_states: true,
        samples_per_pulse: 5,
        ..rk4()
    };
    let t = run(
        &m,
        LindbladSpec {
            gamma: 0.1,
            kappa: 0.1,
        },
        &square(&m),
        opts,
    );
    assert_eq!(t.states.len(), t.samples.len());
    for (rho, s) in t.states.iter().zip(&t.samples) {
        assert!((s.trace - 1.0).abs() < 1e-6);
        assert!(hermitian_deviation(rho) < 1e-12);
        assert!(min_eigenvalue(rho).unwrap() >= -1e-6);
    }
}

#[test]
fn step_limit_enforced() {
    let m = CavityModel::default();
    let err = evolve_from_psi1(
        &m,
        &LindbladSpec::default(),
        &square(&m),
        &EvolveOptions {
            dt: Some(0.1),
            ..rk4()
        },
    );
    assert!(matches!(err, Err(CavityError::BadStep { .. })));
}

#[test]
fn singlet_fidelity_examples() {
    let b = CavityBasis::new(1);
    let s = b.singlet();
    assert!((singlet_fidelity(&pure_density(&s)).unwrap() - 1.0).abs() < 1e-14);
    assert!((singlet_fidelity(&pure_density(&b.psi1())).unwrap() - 1.0 / 3.0).abs() < 1e-14);
    // Swapping atoms 1 and 2 flips the sign of the singlet.
    let mut swapped = StateVector::zeros(b.dim());
    for i in 0..b.dim() {
        let mut st = b.state(i);
        st.atoms.swap(0, 1);
        swapped[b.index(st)] = s[i];
    }
    assert!((&swapped + &s).norm() < 1e-14);
    let rho: DensityMatrix = pure_density(&swapped);
    assert!((singlet_fidelity(&rho).unwrap() - 1.0).abs() < 1e-14);
    assert!(singlet_fidelity(&DensityMatrix::identity(10, 10)).is_err());
}
