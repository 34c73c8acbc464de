//! Taylor coefficients of the actual populations P_r^a(ε₁, ε₂) and
//! P_e^a(ε₁, ε₂) around zero deviation.
//!
//! `P_r^a = C⁽⁰⁾ + Σₗ Σₖ C⁽ˡ⁾ₖ ε-monomialₖ` and likewise `P_e^a` with `D⁽ˡ⁾ₖ`.
//! At order 2 the monomials are ordered (ε₁ε₂, ε₁², ε₂²); at orders ≥ 3 they
//! run ε₁ˡ, ε₁ˡ⁻¹ε₂, …, ε₂ˡ.

mod closed_form;
mod stencil;

pub use closed_form::{
    closed_form_two_pulse, first_order, first_order_five, two_pulse_phases, zeroth_order,
    zeroth_order_five,
};

use cpx_pulse::{actual_populations, CompositeSequence, DeviationPair};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default finite-difference step.
pub const DEFAULT_STEP: f64 = 1e-3;
/// Smallest accepted step; below this round-off dominates.
pub const MIN_STEP: f64 = 1e-8;
/// Largest accepted step.
pub const MAX_STEP: f64 = 1e-2;
/// Highest supported expansion order.
pub const MAX_ORDER: usize = 4;

#[derive(Debug, Error, PartialEq)]
pub enum SeriesError {
    #[error("order {0} unsupported (maximum {MAX_ORDER})")]
    UnsupportedOrder(usize),
    #[error("step {0} outside [{MIN_STEP}, {MAX_STEP}]")]
    BadStep(f64),
    #[error("closed form unavailable for {0} pulses")]
    UnsupportedLength(usize),
    #[error("{alphas} alpha phases but {betas} beta phases")]
    PhaseCountMismatch { alphas: usize, betas: usize },
}

/// Coefficient of ε₁ⁱε₂ʲ with i + j ≥ 3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HigherTerm {
    pub i: u32,
    pub j: u32,
    pub c: f64,
    pub d: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorSeries {
    pub order: usize,
    pub c0: f64,
    pub c1: [f64; 2],
    pub c2: [f64; 3],
    /// Constant and linear terms of P_e^a; zero for every sequence, kept as a check.
    pub d0: f64,
    pub d1: [f64; 2],
    pub d2: [f64; 3],
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub higher: Vec<HigherTerm>,
}

/// Multi-indices (i, j) of order `l` in storage order.
pub fn multi_indices(l: usize) -> Vec<(u32, u32)> {
    match l {
        0 => vec![(0, 0)],
        1 => vec![(1, 0), (0, 1)],
        2 => vec![(1, 1), (2, 0), (0, 2)],
        _ => (0..=l as u32).map(|k| (l as u32 - k, k)).collect(),
    }
}

impl ErrorSeries {
    fn empty(order: usize) -> Self {
        ErrorSeries {
            order,
            c0: 0.0,
            c1: [0.0; 2],
            c2: [0.0; 3],
            d0: 0.0,
            d1: [0.0; 2],
            d2: [0.0; 3],
            higher: vec![],
        }
    }

    /// C⁽ˡ⁾ coefficients in storage order; empty when `l` exceeds the extracted order.
    pub fn c_coeffs(&self, l: usize) -> Vec<f64> {
        self.coeffs(l, true)
    }

    /// D⁽ˡ⁾ coefficients in storage order.
    pub fn d_coeffs(&self, l: usize) -> Vec<f64> {
        self.coeffs(l, false)
    }

    fn coeffs(&self, l: usize, want_c: bool) -> Vec<f64> {
        if l > self.order {
            return vec![];
        }
        let pick = |c: f64, d: f64| if want_c { c } else { d };
        match l {
            0 => vec![pick(self.c0, self.d0)],
            1 => (0..2).map(|k| pick(self.c1[k], self.d1[k])).collect(),
            2 => (0..3).map(|k| pick(self.c2[k], self.d2[k])).collect(),
            _ => multi_indices(l)
                .into_iter()
                .map(|(i, j)| {
                    self.higher
                        .iter()
                        .find(|t| t.i == i && t.j == j)
                        .map(|t| pick(t.c, t.d))
                        .unwrap_or(0.0)
                })
                .collect(),
        }
    }

    /// Σₖ |C⁽ˡ⁾ₖ|².
    pub fn fc(&self, l: usize) -> f64 {
        self.c_coeffs(l).iter().map(|x| x * x).sum()
    }

    /// Σₖ |D⁽ˡ⁾ₖ|².
    pub fn fd(&self, l: usize) -> f64 {
        self.d_coeffs(l).iter().map(|x| x * x).sum()
    }

    fn set(&mut self, i: u32, j: u32, c: f64, d: f64) {
        match (i, j) {
            (0, 0) => {
                self.c0 = c;
                self.d0 = d;
            }
            (1, 0) => {
                self.c1[0] = c;
                self.d1[0] = d;
            }
            (0, 1) => {
                self.c1[1] = c;
                self.d1[1] = d;
            }
            (1, 1) => {
                self.c2[0] = c;
                self.d2[0] = d;
            }
            (2, 0) => {
                self.c2[1] = c;
                self.d2[1] = d;
            }
            (0, 2) => {
                self.c2[2] = c;
                self.d2[2] = d;
            }
            _ => self.higher.push(HigherTerm { i, j, c, d }),
        }
    }

    /// Truncated series for (P_r^a, P_e^a) at the given deviations.
    pub fn predict(&self, d: DeviationPair) -> (f64, f64) {
        let (mut pr, mut pe) = (0.0, 0.0);
        for l in 0..=self.order {
            let c = self.c_coeffs(l);
            let dd = self.d_coeffs(l);
            for (k, (i, j)) in multi_indices(l).into_iter().enumerate() {
                let m = d.eps1.powi(i as i32) * d.eps2.powi(j as i32);
                pr += c[k] * m;
                pe += dd[k] * m;
            }
        }
        (pr, pe)
    }
}

/// Extracts the series of an arbitrary population map `f(ε₁, ε₂) = (P_r, P_e)`
/// by central finite differences with Richardson extrapolation.
pub fn extract_from_fn<F>(f: F, order: usize, h: f64) -> Result<ErrorSeries, SeriesError>
where
    F: Fn(f64, f64) -> (f64, f64),
{
    if order > MAX_ORDER {
        return Err(SeriesError::UnsupportedOrder(order));
    }
    if !(MIN_STEP..=MAX_STEP).contains(&h) || !h.is_finite() {
        return Err(SeriesError::BadStep(h));
    }
    let mut eval = stencil::CachedEval::new(f);
    let mut out = ErrorSeries::empty(order);
    for l in 0..=order {
        for (i, j) in multi_indices(l) {
            let (c, d) = eval.coefficient(i, j, stencil::step_for_order(l, h));
            out.set(i, j, c, d);
        }
    }
    Ok(out)
}

/// Series of a composite sequence's actual populations.
pub fn extract_series(
    seq: &CompositeSequence,
    order: usize,
    h: f64,
) -> Result<ErrorSeries, SeriesError> {
    extract_from_fn(
        |e1, e2| actual_populations(seq, DeviationPair::new(e1, e2)),
        order,
        h,
    )
}
