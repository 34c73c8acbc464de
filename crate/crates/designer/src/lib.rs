//! Phase design for sequences of θₙ = π/4 resonant pulses.
//!
//! Every design fixes α₁ = β₁ = 0, pins the zeroth-order population to sin²θ,
//! removes the first-order error terms, and minimizes a weighted sum of
//! squared higher-order coefficients over whatever phases remain free.

mod constraints;
mod cost;
mod nelder_mead;
mod optimize;
mod poly;
mod tables;
mod two_pulse;

pub use constraints::{constrain_sequence, ConstrainedFamily};
pub use cost::CostSpec;
pub use nelder_mead::{nelder_mead, NelderMeadOptions, NelderMeadResult};
pub use optimize::{optimize_phases, OptimizeOptions};
pub use poly::real_roots;
pub use tables::{
    reference_rows, table_one, verify_table, FiveReading, ReferenceRow, TableReport, TableRow,
    TABLE_TOLERANCE,
};
pub use two_pulse::{
    accuracy_alpha12, balanced_alpha12, balanced_quartic, design_two_pulse, leakage_alpha12,
    two_pulse_cost, Variant, ACCURACY_BRANCH_POINT,
};

use cpx_pulse::{wrap_phase, CompositeSequence, PulseError};
use cpx_series::{ErrorSeries, SeriesError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DesignError {
    #[error("target angle {0} outside [0, π/2]")]
    BadTheta(f64),
    #[error("unsupported pulse count {0}")]
    BadPulseCount(usize),
    #[error("invalid cost specification: {0}")]
    BadCost(String),
    #[error("at least one restart is required")]
    NoRestarts,
    #[error("no restart reached a feasible phase set")]
    Infeasible,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Pulse(#[from] PulseError),
}

/// Bookkeeping from the solver that produced a design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    pub method: String,
    /// Objective evaluations summed over restarts.
    pub iterations: usize,
    pub restarts: usize,
    pub converged: bool,
    /// Cost of the single resonant pulse reaching the same target.
    pub baseline_cost: f64,
    /// Set when no restart beat the single-pulse baseline.
    pub non_improvement: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignResult {
    pub sequence: CompositeSequence,
    pub cost: f64,
    pub series: ErrorSeries,
    pub solver_report: SolverReport,
}

/// Phases of an N-pulse design, wrapped into [0, 2π).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSet {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
}

impl PhaseSet {
    pub fn new(alphas: Vec<f64>, betas: Vec<f64>) -> Self {
        PhaseSet {
            alphas: alphas.into_iter().map(wrap_phase).collect(),
            betas: betas.into_iter().map(wrap_phase).collect(),
        }
    }

    /// Builds absolute phases from consecutive differences x_{n,n+1} = xₙ − xₙ₊₁
    /// with x₁ = 0.
    pub fn from_differences(alpha_diffs: &[f64], beta_diffs: &[f64]) -> Self {
        let accumulate = |d: &[f64]| {
            let mut out = vec![0.0];
            for x in d {
                let last = *out.last().unwrap();
                out.push(last - x);
            }
            out
        };
        PhaseSet::new(accumulate(alpha_diffs), accumulate(beta_diffs))
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn sequence(&self, theta: f64) -> Result<CompositeSequence, PulseError> {
        CompositeSequence::from_phases(theta, &self.alphas, &self.betas)
    }
}

pub(crate) fn check_theta(theta: f64) -> Result<(), DesignError> {
    if !theta.is_finite() || !(0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&theta) {
        return Err(DesignError::BadTheta(theta));
    }
    Ok(())
}

/// Cost of the single resonant pulse that reaches sin²θ directly.
pub fn baseline_cost(theta: f64, cost: &CostSpec) -> Result<f64, DesignError> {
    let seq = CompositeSequence::resonant(theta)?;
    let series = cpx_series::extract_series(&seq, cost.max_order(), cpx_series::DEFAULT_STEP)?;
    Ok(cost.evaluate(&series))
}
