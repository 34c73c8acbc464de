//! Published phase tables and a checker for tabulated designs.

use crate::{check_theta, CostSpec, DesignError, PhaseSet};
use cpx_series::{extract_series, DEFAULT_STEP};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Both constraints must hold to this accuracy for a row rounded to 3 decimals.
pub const TABLE_TOLERANCE: f64 = 5e-3;

/// One row of the N-pulse phase table (α₁ = β₁ = 0 omitted).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub n: usize,
    /// θ = π / divisor.
    pub divisor: u32,
    pub theta: f64,
    /// α₂ … α_N as printed.
    pub alphas: Vec<f64>,
    /// The printed β columns, in printed order.
    pub betas: Vec<f64>,
}

/// A four-pulse design with a reported cost value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceRow {
    pub label: &'static str,
    pub theta: f64,
    pub cost_name: &'static str,
    pub reported_cost: f64,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
}

impl ReferenceRow {
    pub fn cost_spec(&self) -> CostSpec {
        cost_by_name(self.cost_name)
    }

    /// Full phase set with α₁ = β₁ = 0 prepended.
    pub fn phases(&self) -> PhaseSet {
        PhaseSet::new(prepend_zero(&self.alphas), prepend_zero(&self.betas))
    }
}

fn cost_by_name(name: &str) -> CostSpec {
    match name {
        "Fc2+Fc3" => CostSpec {
            weights_c: vec![(2, 1.0), (3, 1.0)],
            weights_d: vec![],
        },
        "Fd2+Fd3+Fd4" => CostSpec {
            weights_c: vec![],
            weights_d: vec![(2, 1.0), (3, 1.0), (4, 1.0)],
        },
        _ => CostSpec::second_order(),
    }
}

fn prepend_zero(x: &[f64]) -> Vec<f64> {
    let mut v = vec![0.0];
    v.extend_from_slice(x);
    v
}

/// How the five-pulse β columns are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiveReading {
    /// Columns are β₁ … β₄, with β₅ = 0.
    BetaOneToFour,
    /// Columns are β₂ … β₅, with β₁ = 0.
    BetaTwoToFive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableReport {
    pub n: usize,
    pub theta: f64,
    /// Reading that was finally used (five pulses only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reading: Option<FiveReading>,
    pub c0_error: f64,
    pub c1_norm: f64,
    /// F_c⁽²⁾ + F_d⁽²⁾.
    pub cost: f64,
    pub pass: bool,
}

// Printed values; 3.142 and 6.283 are data, not π and 2π.
#[allow(clippy::approx_constant)]
const T3: [(u32, [f64; 4]); 8] = [
    (2, [3.911, 3.142, 2.340, 3.142]),
    (3, [2.663, 5.027, 1.562, 0.189]),
    (4, [2.497, 4.859, 1.450, 0.670]),
    (5, [3.828, 1.466, 4.894, 5.313]),
    (6, [3.870, 1.508, 4.971, 5.155]),
    (7, [3.911, 1.550, 5.048, 5.070]),
    (10, [3.953, 1.550, 5.179, 4.883]),
    (20, [1.664, 3.267, 3.038, 0.174]),
];

#[allow(clippy::approx_constant)]
const T4: [(u32, [f64; 6]); 8] = [
    (2, [3.195, 4.817, 1.831, 1.630, 0.110, 4.983]),
    (3, [2.769, 5.550, 1.526, 5.762, 5.401, 2.275]),
    (4, [3.554, 2.374, 6.030, 2.768, 4.729, 6.027]),
    (5, [3.514, 1.885, 5.420, 2.786, 4.299, 5.850]),
    (6, [3.514, 1.047, 4.429, 2.852, 3.527, 5.200]),
    (7, [5.431, 3.456, 3.162, 4.786, 5.953, 4.117]),
    (10, [3.408, 0.733, 4.039, 2.840, 3.307, 5.417]),
    (20, [6.283, 3.351, 3.665, 5.853, 6.063, 5.633]),
];

const T5: [(u32, [f64; 8]); 8] = [
    (2, [5.291, 2.472, 1.925, 6.089, 1.325, 5.943, 4.238, 6.095]),
    (3, [2.707, 5.876, 2.868, 5.175, 6.032, 2.260, 1.730, 5.963]),
    (4, [3.575, 1.214, 2.962, 6.015, 4.985, 4.848, 2.674, 4.759]),
    (5, [3.285, 0.744, 4.382, 1.603, 4.232, 4.050, 5.108, 3.656]),
    (6, [3.317, 0.802, 4.516, 1.688, 4.266, 4.106, 5.013, 3.469]),
    (7, [2.677, 4.582, 0.254, 3.172, 3.787, 3.449, 3.913, 5.049]),
    (10, [5.948, 2.591, 4.891, 3.048, 3.871, 5.556, 5.753, 5.134]),
    (20, [1.837, 0.585, 4.787, 4.277, 3.287, 0.220, 3.388, 0.247]),
];

/// All 24 rows of the three-, four- and five-pulse table.
pub fn table_one() -> Vec<TableRow> {
    let mut rows = Vec::new();
    let mut push = |n: usize, divisor: u32, v: &[f64]| {
        let split = n - 1;
        rows.push(TableRow {
            n,
            divisor,
            theta: PI / divisor as f64,
            alphas: v[..split].to_vec(),
            betas: v[split..].to_vec(),
        });
    };
    for (d, v) in T3 {
        push(3, d, &v);
    }
    for (d, v) in T4 {
        push(4, d, &v);
    }
    for (d, v) in T5 {
        push(5, d, &v);
    }
    rows
}

/// Four-pulse designs obtained with different cost functions.
pub fn reference_rows() -> Vec<ReferenceRow> {
    let row = |label, divisor: f64, cost_name, reported_cost, v: [f64; 6]| ReferenceRow {
        label,
        theta: PI / divisor,
        cost_name,
        reported_cost,
        alphas: v[..3].to_vec(),
        betas: v[3..].to_vec(),
    };
    vec![
        row(
            "bloch-b",
            4.0,
            "Fc2+Fc3",
            0.0003,
            [6.0928, 4.6077, 1.2835, 2.1652, 3.8217, 1.2823],
        ),
        row(
            "bloch-c",
            4.0,
            "Fd2+Fd3+Fd4",
            0.0004,
            [3.6176, 0.5585, 3.1750, 4.3222, 4.4047, 6.1550],
        ),
        row(
            "bloch-d",
            4.0,
            "Fc2+Fd2",
            0.0007,
            [3.5541, 2.3736, 6.0291, 2.7675, 4.7286, 6.0267],
        ),
        row(
            "accuracy-pi/3",
            3.0,
            "Fc2+Fc3",
            0.0054,
            [3.0883, 5.0265, 1.7134, 2.1955, 0.9921, 0.9750],
        ),
        row(
            "accuracy-pi/5",
            5.0,
            "Fc2+Fc3",
            0.0015,
            [3.3013, 0.0000, 2.9063, 2.5848, 2.4251, 3.3583],
        ),
        row(
            "accuracy-pi/7",
            7.0,
            "Fc2+Fc3",
            0.0014,
            [3.1948, 5.1313, 2.0471, 4.7325, 3.5274, 1.0833],
        ),
        row(
            "accuracy-pi/10",
            10.0,
            "Fc2+Fc3",
            0.0010,
            [3.3013, 0.6283, 3.6638, 4.4918, 4.9604, 2.2749],
        ),
        row(
            "leakage-pi/3",
            3.0,
            "Fd2+Fd3+Fd4",
            0.0021,
            [3.9403, 0.9425, 3.0538, 4.7064, 4.8502, 5.6332],
        ),
        row(
            "leakage-pi/5",
            5.0,
            "Fd2+Fd3+Fd4",
            0.0009,
            [3.5143, 3.6652, 1.2319, 2.6600, 5.9525, 1.4083],
        ),
        row(
            "leakage-pi/7",
            7.0,
            "Fd2+Fd3+Fd4",
            0.0010,
            [3.1948, 0.1047, 3.1443, 3.6964, 3.7479, 0.1083],
        ),
        row(
            "leakage-pi/10",
            10.0,
            "Fd2+Fd3+Fd4",
            2e-5,
            [3.4078, 0.2094, 3.0884, 3.6944, 3.6376, 6.1749],
        ),
        row(
            "balanced-pi/3",
            3.0,
            "Fc2+Fd2",
            0.0027,
            [2.7689, 5.5501, 1.5253, 5.7617, 5.4013, 2.2749],
        ),
        row(
            "balanced-pi/5",
            5.0,
            "Fc2+Fd2",
            0.0025,
            [3.5143, 1.8850, 5.4201, 2.7867, 4.2990, 5.8499],
        ),
        row(
            "balanced-pi/7",
            7.0,
            "Fc2+Fd2",
            0.0036,
            [3.4603, 1.9897, 5.4838, 2.8304, 4.5014, 0.1848],
        ),
        row(
            "balanced-pi/10",
            10.0,
            "Fc2+Fd2",
            0.0014,
            [3.4078, 0.7330, 4.0386, 2.8401, 3.3069, 5.4165],
        ),
    ]
}

fn check(
    n: usize,
    theta: f64,
    set: &PhaseSet,
    reading: Option<FiveReading>,
) -> Result<TableReport, DesignError> {
    let s = extract_series(&set.sequence(theta)?, 2, DEFAULT_STEP)?;
    let c0_error = (s.c0 - theta.sin().powi(2)).abs();
    let c1_norm = s.c1[0].hypot(s.c1[1]);
    Ok(TableReport {
        n,
        theta,
        reading,
        c0_error,
        c1_norm,
        cost: CostSpec::second_order().evaluate(&s),
        pass: c0_error < TABLE_TOLERANCE && c1_norm < TABLE_TOLERANCE,
    })
}

/// Checks a tabulated row: `alphas` are α₂ … α_N and `betas` the printed β
/// columns. Five-pulse rows are first read as β₁ … β₄ (β₅ = 0) and, if that
/// fails, as β₂ … β₅.
pub fn verify_table(
    n: usize,
    theta: f64,
    alphas: &[f64],
    betas: &[f64],
) -> Result<TableReport, DesignError> {
    check_theta(theta)?;
    if !(2..=8).contains(&n) {
        return Err(DesignError::BadPulseCount(n));
    }
    if alphas.len() != n - 1 || betas.len() != n - 1 {
        return Err(DesignError::BadCost(format!(
            "expected {} alphas and {} betas, got {} and {}",
            n - 1,
            n - 1,
            alphas.len(),
            betas.len()
        )));
    }
    let full_alphas = prepend_zero(alphas);
    if n == 5 {
        let mut literal = betas.to_vec();
        literal.push(0.0);
        let first = check(
            n,
            theta,
            &PhaseSet::new(full_alphas.clone(), literal),
            Some(FiveReading::BetaOneToFour),
        )?;
        if first.pass {
            return Ok(first);
        }
        let set = PhaseSet::new(full_alphas, prepend_zero(betas));
        return check(n, theta, &set, Some(FiveReading::BetaTwoToFive));
    }
    check(
        n,
        theta,
        &PhaseSet::new(full_alphas, prepend_zero(betas)),
        None,
    )
}
