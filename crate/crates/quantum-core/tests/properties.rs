use cpx_quantum::*;
use proptest::prelude::*;

fn hermitian_from(entries: &[f64], n: usize) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        h[(i, i)] = c64(entries[k], 0.0);
        k += 1;
        for j in (i + 1)..n {
            let z = c64(entries[k], entries[k + 1]);
            k += 2;
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

fn state_from(entries: &[f64]) -> StateVector {
    let v = StateVector::from_iterator(
        entries.len() / 2,
        entries.chunks(2).map(|p| c64(p[0], p[1])),
    );
    let n = v.norm();
    v / c64(n, 0.0)
}

proptest! {
    #[test]
    fn expm_unitary_and_additive(entries in prop::collection::vec(-2.0f64..2.0, 16), t1 in -3.0f64..3.0, t2 in -3.0f64..3.0) {
        let h = hermitian_from(&entries, 4);
        let u1 = hermitian_expm(&h, t1).unwrap();
        let u2 = hermitian_expm(&h, t2).unwrap();
        let u12 = hermitian_expm(&h, t1 + t2).unwrap();
        prop_assert!(unitarity_deviation(&u12) < UNITARY_TOL);
        prop_assert!(max_abs(&(u1 * u2 - u12)) < 1e-9);
    }

    #[test]
    fn eigendecomposition_reconstructs(entries in prop::collection::vec(-5.0f64..5.0, 25)) {
        let h = hermitian_from(&entries, 5);
        let (d, v) = eigh(&h).unwrap();
        let dm = ComplexMatrix::from_diagonal(&d.map(|x| c64(x, 0.0)));
        prop_assert!(max_abs(&(&v * dm * v.adjoint() - h)) < 1e-10);
    }

    #[test]
    fn fidelity_symmetric_and_phase_invariant(a in prop::collection::vec(-1.0f64..1.0, 6), b in prop::collection::vec(-1.0f64..1.0, 6), phi in 0.0f64..6.3) {
        prop_assume!(a.iter().any(|x| x.abs() > 1e-3) && b.iter().any(|x| x.abs() > 1e-3));
        let sa = state_from(&a);
        let sb = state_from(&b);
        let f = fidelity(&sa, &sb).unwrap();
        prop_assert!((f - fidelity(&sb, &sa).unwrap()).abs() < 1e-14);
        let rotated = &sa * cis(phi);
        prop_assert!((f - fidelity(&rotated, &sb).unwrap()).abs() < 1e-14);
        prop_assert!((f - fidelity_mixed(&pure_density(&sa), &sb).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn unitary_evolution_preserves_norm(entries in prop::collection::vec(-2.0f64..2.0, 9), psi in prop::collection::vec(-1.0f64..1.0, 6), t in 0.0f64..10.0) {
        prop_assume!(psi.iter().any(|x| x.abs() > 1e-3));
        let h = hermitian_from(&entries, 3);
        let s = state_from(&psi);
        let evolved = hermitian_expm(&h, t).unwrap() * s;
        prop_assert!((evolved.norm() - 1.0).abs() < NORM_TOL);
    }
}
