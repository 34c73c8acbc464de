use cpx_pulse::*;
use cpx_quantum::{hermitian_expm, phase_gauged_distance};
use proptest::prelude::*;
use std::f64::consts::TAU;

fn pulse_strategy() -> impl Strategy<Value = PulseParams> {
    (
        0.1f64..2.0,
        0.0f64..2.0,
        -3.0f64..3.0,
        0.0f64..TAU,
        0.0f64..TAU,
    )
        .prop_map(|(o1, o2, d, a, b)| PulseParams::new(o1, o2, d, a, b).unwrap())
}

fn sequence_strategy(max_len: usize) -> impl Strategy<Value = CompositeSequence> {
    (
        prop::collection::vec(pulse_strategy(), 1..=max_len),
        0.0f64..1.57,
    )
        .prop_map(|(pulses, th)| CompositeSequence::new(th, pulses).unwrap())
}

proptest! {
    #[test]
    fn closed_form_equals_exponential(p in pulse_strategy()) {
        let exact = hermitian_expm(&hamiltonian(&p, DeviationPair::ZERO), p.duration()).unwrap();
        prop_assert!(phase_gauged_distance(&ideal_propagator(&p), &exact) < 1e-9);
    }

    #[test]
    fn recursion_equals_matrix_product(seq in sequence_strategy(8)) {
        let (u, a) = compose(&seq);
        prop_assert!((a.vartheta.sin().powi(2) - u[(1, 0)].norm_sqr()).abs() < 1e-9);
    }

    #[test]
    fn populations_sum_to_one(seq in sequence_strategy(6), e1 in -0.5f64..0.5, e2 in -0.5f64..0.5) {
        let psi = final_state(&seq, DeviationPair::new(e1, e2));
        let total: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn no_leakage_without_deviation(seq in sequence_strategy(6)) {
        let (pr, pe) = actual_populations(&seq, DeviationPair::ZERO);
        prop_assert!(pe < 1e-10);
        prop_assert!((pr - ideal_population(&seq).0).abs() < 1e-10);
    }

    #[test]
    fn common_phase_shifts_do_not_matter(
        alphas in prop::collection::vec(0.0f64..TAU, 2..6),
        betas_seed in prop::collection::vec(0.0f64..TAU, 6),
        da in 0.0f64..TAU, db in 0.0f64..TAU,
        e1 in -0.3f64..0.3, e2 in -0.3f64..0.3,
    ) {
        let n = alphas.len();
        let betas = &betas_seed[..n];
        let seq = CompositeSequence::from_phases(0.5, &alphas, betas).unwrap();
        let sa: Vec<f64> = alphas.iter().map(|a| a + da).collect();
        let sb: Vec<f64> = betas.iter().map(|b| b + db).collect();
        let shifted = CompositeSequence::from_phases(0.5, &sa, &sb).unwrap();
        let d = DeviationPair::new(e1, e2);
        let (p1, q1) = actual_populations(&seq, d);
        let (p2, q2) = actual_populations(&shifted, d);
        prop_assert!((p1 - p2).abs() < 1e-12 && (q1 - q2).abs() < 1e-12);
    }
}

#[test]
fn exact_propagation_matches_eigendecomposition_route() {
    let seq =
        CompositeSequence::from_phases(0.6, &[0.0, 2.0, 4.5, 1.0], &[0.0, 5.0, 0.3, 2.2]).unwrap();
    let d = DeviationPair::new(0.13, -0.21);
    let mut psi = cpx_quantum::basis_state(3, 0);
    for p in &seq.pulses {
        psi = hermitian_expm(&hamiltonian(p, d), p.duration()).unwrap() * psi;
    }
    let (pr, pe) = actual_populations(&seq, d);
    assert!((pr - psi[1].norm_sqr()).abs() < 1e-12);
    assert!((pe - psi[2].norm_sqr()).abs() < 1e-12);
}
