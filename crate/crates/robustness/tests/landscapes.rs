use cpx_designer::{
    design_two_pulse, optimize_phases, table_one, CostSpec, OptimizeOptions, PhaseSet, Variant,
};
use cpx_pulse::{final_state, CompositeSequence, DeviationPair};
use cpx_robustness::*;
use std::f64::consts::FRAC_PI_4;

fn table_sequence(n: usize, divisor: u32) -> CompositeSequence {
    let row = table_one()
        .into_iter()
        .find(|r| r.n == n && r.divisor == divisor)
        .unwrap();
    let mut a = vec![0.0];
    a.extend(&row.alphas);
    let mut b = vec![0.0];
    b.extend(&row.betas);
    PhaseSet::new(a, b).sequence(row.theta).unwrap()
}

fn box_grid() -> ScanGrid {
    ScanGrid::reference_box(101).unwrap()
}

#[test]
fn origin_is_exact_for_designed_sequences() {
    let g = ScanGrid::reference_box(11).unwrap();
    let opts = OptimizeOptions {
        restarts: 2,
        max_evals: 400,
        ..Default::default()
    };
    let mut designs: Vec<CompositeSequence> =
        [Variant::Accuracy, Variant::Leakage, Variant::Balanced]
            .map(|v| design_two_pulse(0.9, v).unwrap().sequence)
            .into();
    designs.push(
        optimize_phases(3, 0.4, &CostSpec::second_order(), &opts)
            .unwrap()
            .sequence,
    );
    designs.push(
        optimize_phases(4, 1.2, &CostSpec::accuracy(), &opts)
            .unwrap()
            .sequence,
    );
    for seq in designs {
        let l = scan(&seq, &g).unwrap();
        // the 11-point axis puts ε = 0 at index 5
        assert!(l.infidelity[5][5] < 1e-10 && l.leakage[5][5] < 1e-10);
    }
}

#[test]
fn resonant_pulse_region_is_negligible() {
    let l = scan(
        &CompositeSequence::resonant(FRAC_PI_4).unwrap(),
        &box_grid(),
    )
    .unwrap();
    assert_eq!(l.box_nodes, 101 * 101);
    assert!(l.area(0.001).unwrap().infidelity < 0.02);
}

#[test]
fn three_pulses_beat_resonant() {
    let g = box_grid();
    let res = scan(&CompositeSequence::resonant(FRAC_PI_4).unwrap(), &g).unwrap();
    let three = scan(&table_sequence(3, 4), &g).unwrap();
    let c = compare(&res, &three, 0.001).unwrap();
    assert!(
        c.rows[0].infidelity_diff > 0.0 && c.rows[0].leakage_diff > 0.0,
        "{c:?}"
    );
}

#[test]
fn five_pulses_widen_infidelity_region() {
    let g = box_grid();
    let four = scan(&table_sequence(4, 4), &g).unwrap();
    let five = scan(&table_sequence(5, 4), &g).unwrap();
    assert!(compare(&four, &five, 0.001).unwrap().infidelity_not_smaller);
}

#[test]
fn variants_trade_accuracy_for_leakage() {
    let g = box_grid();
    let acc = scan(
        &design_two_pulse(FRAC_PI_4, Variant::Accuracy)
            .unwrap()
            .sequence,
        &g,
    )
    .unwrap();
    let leak = scan(
        &design_two_pulse(FRAC_PI_4, Variant::Leakage)
            .unwrap()
            .sequence,
        &g,
    )
    .unwrap();
    let (a, l) = (acc.area(0.001).unwrap(), leak.area(0.001).unwrap());
    assert!(
        a.infidelity > l.infidelity && a.leakage < l.leakage,
        "{a:?} {l:?}"
    );
}

#[test]
fn self_comparison_is_zero() {
    let l = scan(&table_sequence(3, 3), &ScanGrid::reference_box(21).unwrap()).unwrap();
    let c = compare(&l, &l, 0.01).unwrap();
    assert!(c
        .rows
        .iter()
        .all(|r| r.infidelity_diff == 0.0 && r.leakage_diff == 0.0));
    assert!(c.infidelity_not_smaller && c.leakage_not_smaller);
}

#[test]
fn mismatched_grids_rejected() {
    let seq = table_sequence(3, 3);
    let a = scan(&seq, &ScanGrid::reference_box(11).unwrap()).unwrap();
    let b = scan(&seq, &ScanGrid::reference_box(13).unwrap()).unwrap();
    assert_eq!(compare(&a, &b, 0.001), Err(RobustnessError::GridMismatch));
}

#[test]
fn repeated_scans_bit_identical() {
    let g = ScanGrid::square(-0.5, 0.5, 31).unwrap();
    let seq = table_sequence(4, 6);
    assert_eq!(scan(&seq, &g).unwrap(), scan(&seq, &g).unwrap());
}

#[test]
fn populations_sum_to_one_everywhere() {
    let seq = table_sequence(5, 3);
    let sums = map_grid(&ScanGrid::default(), |d: DeviationPair| {
        final_state(&seq, d)
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
    })
    .unwrap();
    assert!(sums.iter().flatten().all(|s| (s - 1.0).abs() < 1e-10));
}

#[test]
fn values_are_probabilities() {
    let l = scan(&table_sequence(3, 7), &ScanGrid::default()).unwrap();
    for v in l.infidelity.iter().chain(&l.leakage).flatten() {
        assert!((0.0..=1.0).contains(v));
    }
    for r in &l.region_areas {
        assert!((0.0..=1.0).contains(&r.infidelity) && (0.0..=1.0).contains(&r.leakage));
    }
}
