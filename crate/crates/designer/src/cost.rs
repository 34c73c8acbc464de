use crate::DesignError;
use cpx_series::{ErrorSeries, MAX_ORDER};
use serde::{Deserialize, Serialize};

/// Weights of the cost F = Σₗ A_l F_c⁽ˡ⁾ + B_l F_d⁽ˡ⁾ where F_c⁽ˡ⁾ (F_d⁽ˡ⁾) is the
/// sum of squared order-l coefficients of P_r^a (P_e^a).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostSpec {
    /// (order l, A_l)
    #[serde(default)]
    pub weights_c: Vec<(usize, f64)>,
    /// (order l, B_l)
    #[serde(default)]
    pub weights_d: Vec<(usize, f64)>,
}

impl Default for CostSpec {
    fn default() -> Self {
        Self::second_order()
    }
}

impl CostSpec {
    /// F_c⁽²⁾ + F_d⁽²⁾.
    pub fn second_order() -> Self {
        CostSpec {
            weights_c: vec![(2, 1.0)],
            weights_d: vec![(2, 1.0)],
        }
    }

    /// F_c⁽²⁾ only.
    pub fn accuracy() -> Self {
        CostSpec {
            weights_c: vec![(2, 1.0)],
            weights_d: vec![],
        }
    }

    /// F_d⁽²⁾ only.
    pub fn leakage() -> Self {
        CostSpec {
            weights_c: vec![],
            weights_d: vec![(2, 1.0)],
        }
    }

    pub fn validate(&self) -> Result<(), DesignError> {
        for (name, list) in [("C", &self.weights_c), ("D", &self.weights_d)] {
            let mut sorted = list.clone();
            sorted.sort_by_key(|&(l, _)| l);
            for w in sorted.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(DesignError::BadCost(format!(
                        "order {} listed twice for {name}",
                        w[0].0
                    )));
                }
                if w[1].0 == w[0].0 + 1 && w[0].1 > w[1].1 {
                    return Err(DesignError::BadCost(format!(
                        "{name} weights must not decrease with order ({} at order {} > {} at order {})",
                        w[0].1, w[0].0, w[1].1, w[1].0
                    )));
                }
            }
            for &(l, w) in list {
                if !(2..=MAX_ORDER).contains(&l) {
                    return Err(DesignError::BadCost(format!(
                        "order {l} outside 2..={MAX_ORDER}"
                    )));
                }
                if !w.is_finite() || w < 0.0 {
                    return Err(DesignError::BadCost(format!(
                        "weight {w} must be finite and non-negative"
                    )));
                }
            }
        }
        if !self
            .weights_c
            .iter()
            .chain(&self.weights_d)
            .any(|&(_, w)| w > 0.0)
        {
            return Err(DesignError::BadCost(
                "at least one weight must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Highest order with a listed weight.
    pub fn max_order(&self) -> usize {
        self.weights_c
            .iter()
            .chain(&self.weights_d)
            .map(|&(l, _)| l)
            .max()
            .unwrap_or(2)
    }

    pub fn evaluate(&self, s: &ErrorSeries) -> f64 {
        let c: f64 = self.weights_c.iter().map(|&(l, a)| a * s.fc(l)).sum();
        let d: f64 = self.weights_d.iter().map(|&(l, b)| b * s.fd(l)).sum();
        c + d
    }

    /// True when only second-order weights are present.
    pub(crate) fn second_order_weights(&self) -> Option<(f64, f64)> {
        if self.max_order() != 2 {
            return None;
        }
        let a = self.weights_c.iter().map(|&(_, w)| w).sum();
        let b = self.weights_d.iter().map(|&(_, w)| w).sum();
        Some((a, b))
    }
}
