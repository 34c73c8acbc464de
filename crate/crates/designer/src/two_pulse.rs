//! Closed-form optimal phases for two pulses.
//!
//! With β₁₂ = α₁₂ − 2θ the first order vanishes identically and the only free
//! phase is α₁₂. The second-order coefficients are known in closed form, so
//! each cost has an analytic minimizer.

use crate::{
    baseline_cost, check_theta, poly, CostSpec, DesignError, DesignResult, PhaseSet, SolverReport,
};
use cpx_series::{closed_form_two_pulse, extract_series, two_pulse_phases, DEFAULT_STEP};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, SQRT_2, TAU};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Minimizes F_c⁽²⁾.
    Accuracy,
    /// Minimizes F_d⁽²⁾.
    Leakage,
    /// Minimizes F_c⁽²⁾ + F_d⁽²⁾.
    Balanced,
}

impl Variant {
    pub fn cost_spec(self) -> CostSpec {
        match self {
            Variant::Accuracy => CostSpec::accuracy(),
            Variant::Leakage => CostSpec::leakage(),
            Variant::Balanced => CostSpec::second_order(),
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "accuracy" => Ok(Variant::Accuracy),
            "leakage" => Ok(Variant::Leakage),
            "balanced" => Ok(Variant::Balanced),
            other => Err(format!(
                "unknown variant '{other}' (accuracy, leakage, balanced)"
            )),
        }
    }
}

/// Closed-form cost of the variant at α₁₂.
pub fn two_pulse_cost(alpha12: f64, theta: f64, variant: Variant) -> f64 {
    let s = closed_form_two_pulse(alpha12, theta);
    match variant {
        Variant::Accuracy => s.fc(2),
        Variant::Leakage => s.fd(2),
        Variant::Balanced => s.fc(2) + s.fd(2),
    }
}

/// θ′ = arcsin[19π² / (√2(16 + 19π²))], where the accuracy optimum switches branch.
pub const ACCURACY_BRANCH_POINT: f64 = 0.709_582_771_107_310_6;

fn accuracy_ratio() -> f64 {
    SQRT_2 * (16.0 + 19.0 * PI * PI) / (19.0 * PI * PI)
}

/// α₁₂ minimizing F_c⁽²⁾.
pub fn accuracy_alpha12(theta: f64) -> f64 {
    if theta <= ACCURACY_BRANCH_POINT {
        theta + (accuracy_ratio() * theta.sin()).min(1.0).asin()
    } else {
        theta + FRAC_PI_2
    }
}

/// α₁₂ minimizing F_d⁽²⁾.
pub fn leakage_alpha12(theta: f64) -> f64 {
    let k = SQRT_2 - 1.0;
    PI + (k * (2.0 * theta).sin() / (k * (2.0 * theta).cos() + 1.0)).atan()
}

/// Coefficients (a₁ … a₅) of the quartic in Θ = tan(α₁₂/2) whose real roots
/// are the stationary points of F_c⁽²⁾ + F_d⁽²⁾.
pub fn balanced_quartic(theta: f64) -> [f64; 5] {
    let pi2 = PI * PI;
    let s = theta.sin();
    let s2 = s * s;
    let s4 = s2 * s2;
    let sin2 = (2.0 * theta).sin();
    let cos2 = (2.0 * theta).cos();
    let k = SQRT_2 - 1.0;
    [
        (19.0 * pi2 * k * k - 16.0 * SQRT_2) * s2 * sin2,
        76.0 * pi2 * (SQRT_2 + 1.0 + (3.0 - SQRT_2) * cos2) * s2 + 64.0 * SQRT_2 * s4,
        57.0 * pi2 * (2.0 * SQRT_2 + 1.0 + 3.0 * cos2) * sin2,
        64.0 * SQRT_2 * s4
            + 19.0
                * pi2
                * (13.0
                    + 11.0 * SQRT_2
                    + 4.0 * (2.0 + SQRT_2) * cos2
                    + (3.0 + SQRT_2) * (4.0 * theta).cos()),
        sin2 * (16.0 * SQRT_2 * s2
            - 19.0 * pi2 * (1.0 + (SQRT_2 + 1.0).powi(2) * theta.cos().powi(2))),
    ]
}

/// α₁₂ minimizing F_c⁽²⁾ + F_d⁽²⁾, and whether the grid fallback was needed.
pub fn balanced_alpha12(theta: f64) -> (f64, bool) {
    let roots = poly::real_roots(&balanced_quartic(theta));
    if roots.is_empty() {
        return (grid_minimum(theta, Variant::Balanced), true);
    }
    // Θ → ∞ corresponds to α₁₂ = π and is lost when the leading coefficient vanishes.
    let mut candidates = vec![PI];
    for r in roots {
        let a = 2.0 * r.atan();
        candidates.push(a.rem_euclid(TAU));
        candidates.push((a + PI).rem_euclid(TAU));
    }
    let best = candidates
        .into_iter()
        .map(|a| (two_pulse_cost(a, theta, Variant::Balanced), a))
        .min_by(|x, y| x.0.partial_cmp(&y.0).unwrap())
        .unwrap();
    (best.1, false)
}

/// Dense grid plus golden-section refinement; used when the quartic has no real root.
fn grid_minimum(theta: f64, variant: Variant) -> f64 {
    let n = 20_000;
    let h = TAU / n as f64;
    let f = |a: f64| two_pulse_cost(a, theta, variant);
    let best = (0..n)
        .map(|i| i as f64 * h)
        .min_by(|a, b| f(*a).partial_cmp(&f(*b)).unwrap())
        .unwrap();
    let (mut lo, mut hi) = (best - h, best + h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        if f(x1) < f(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    ((lo + hi) / 2.0).rem_euclid(TAU)
}

/// Two-pulse design: β₁₂ = α₁₂ − 2θ and the variant's analytic α₁₂.
pub fn design_two_pulse(theta: f64, variant: Variant) -> Result<DesignResult, DesignError> {
    check_theta(theta)?;
    let (alpha12, fallback) = match variant {
        Variant::Accuracy => (accuracy_alpha12(theta), false),
        Variant::Leakage => (leakage_alpha12(theta), false),
        Variant::Balanced => balanced_alpha12(theta),
    };
    let (a, b) = two_pulse_phases(alpha12, theta);
    let sequence = PhaseSet::new(a.to_vec(), b.to_vec()).sequence(theta)?;
    let spec = variant.cost_spec();
    let series = extract_series(&sequence, 2, DEFAULT_STEP)?;
    let cost = spec.evaluate(&series);
    let baseline = baseline_cost(theta, &spec)?;
    Ok(DesignResult {
        sequence,
        cost,
        series,
        solver_report: SolverReport {
            method: format!("two-pulse closed form ({variant:?})").to_lowercase(),
            iterations: 0,
            restarts: 0,
            converged: true,
            baseline_cost: baseline,
            non_improvement: cost >= baseline,
            note: fallback.then(|| "quartic has no real root; grid minimization used".to_string()),
        },
    })
}
