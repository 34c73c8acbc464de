use crate::constraints::{constrain_sequence, ConstrainedFamily};
use crate::nelder_mead::{nelder_mead, NelderMeadOptions, NelderMeadResult};
use crate::two_pulse::{design_two_pulse, Variant};
use crate::{
    baseline_cost, check_theta, CostSpec, DesignError, DesignResult, PhaseSet, SolverReport,
};
use cpx_series::{extract_series, two_pulse_phases, ErrorSeries, DEFAULT_STEP};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::TAU;

/// Largest supported pulse count.
pub const MAX_PULSES: usize = 8;

/// Weight of the squared constraint residuals in the penalty objective (N > 5).
const PENALTY: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeOptions {
    pub restarts: usize,
    pub seed: u64,
    pub max_evals: usize,
    pub simplex_size: f64,
    pub tol: f64,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        OptimizeOptions {
            restarts: 200,
            seed: 0,
            max_evals: 5000,
            simplex_size: 0.5,
            tol: 1e-8,
        }
    }
}

impl OptimizeOptions {
    fn nelder_mead(&self) -> NelderMeadOptions {
        NelderMeadOptions {
            simplex_size: self.simplex_size,
            tol: self.tol,
            max_evals: self.max_evals,
        }
    }
}

enum Problem {
    TwoPulse { theta: f64 },
    Family(ConstrainedFamily),
    Penalized { theta: f64, n: usize },
}

impl Problem {
    fn dim(&self) -> usize {
        match self {
            Problem::TwoPulse { .. } => 1,
            Problem::Family(f) => f.free_dim(),
            Problem::Penalized { n, .. } => 2 * (n - 1),
        }
    }

    /// Candidate phase sets for a point in the free-phase space.
    fn candidates(&self, x: &[f64]) -> Vec<PhaseSet> {
        match self {
            Problem::TwoPulse { theta } => {
                let (a, b) = two_pulse_phases(x[0], *theta);
                vec![PhaseSet::new(a.to_vec(), b.to_vec())]
            }
            Problem::Family(f) => f.solutions(x),
            Problem::Penalized { n, .. } => vec![absolute_phases(x, *n)],
        }
    }
}

fn absolute_phases(x: &[f64], n: usize) -> PhaseSet {
    let mut alphas = vec![0.0];
    alphas.extend_from_slice(&x[..n - 1]);
    let mut betas = vec![0.0];
    betas.extend_from_slice(&x[n - 1..]);
    PhaseSet::new(alphas, betas)
}

struct Evaluator<'a> {
    problem: Problem,
    theta: f64,
    cost: &'a CostSpec,
    order: usize,
}

impl Evaluator<'_> {
    fn series(&self, set: &PhaseSet) -> Option<ErrorSeries> {
        let seq = set.sequence(self.theta).ok()?;
        extract_series(&seq, self.order, DEFAULT_STEP).ok()
    }

    fn objective_of(&self, set: &PhaseSet) -> f64 {
        let Some(s) = self.series(set) else {
            return f64::INFINITY;
        };
        let mut f = self.cost.evaluate(&s);
        if let Problem::Penalized { .. } = self.problem {
            f += PENALTY * residual_norm2(&s, self.theta);
        }
        f
    }

    /// Best candidate at x and its objective value.
    fn best_at(&self, x: &[f64]) -> Option<(PhaseSet, f64)> {
        self.problem
            .candidates(x)
            .into_iter()
            .map(|s| {
                let f = self.objective_of(&s);
                (s, f)
            })
            .filter(|(_, f)| f.is_finite())
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }

    fn objective(&self, x: &[f64]) -> f64 {
        self.best_at(x).map_or(f64::INFINITY, |(_, f)| f)
    }
}

fn residual(s: &ErrorSeries, theta: f64) -> [f64; 3] {
    [s.c0 - theta.sin().powi(2), s.c1[0], s.c1[1]]
}

fn residual_norm2(s: &ErrorSeries, theta: f64) -> f64 {
    residual(s, theta).iter().map(|r| r * r).sum()
}

/// Gauss–Newton projection of free phases onto C⁽⁰⁾ = sin²θ, C⁽¹⁾ = 0 using
/// the minimum-norm step from a pseudo-inverse of a central-difference Jacobian.
fn project(x: &[f64], n: usize, theta: f64) -> Vec<f64> {
    let res = |x: &[f64]| -> Option<[f64; 3]> {
        let seq = absolute_phases(x, n).sequence(theta).ok()?;
        extract_series(&seq, 1, DEFAULT_STEP)
            .ok()
            .map(|s| residual(&s, theta))
    };
    let mut x = x.to_vec();
    let h = 1e-6;
    for _ in 0..50 {
        let Some(r) = res(&x) else { break };
        let norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-12 {
            break;
        }
        let mut jac = DMatrix::<f64>::zeros(3, x.len());
        for k in 0..x.len() {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[k] += h;
            xm[k] -= h;
            let (Some(rp), Some(rm)) = (res(&xp), res(&xm)) else {
                return x;
            };
            for i in 0..3 {
                jac[(i, k)] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let Ok(pinv) = jac.pseudo_inverse(1e-10) else {
            break;
        };
        let step = pinv * DVector::from_column_slice(&r);
        // Halve until the residual decreases.
        let mut t = 1.0;
        let mut improved = false;
        while t > 1e-4 {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, d)| a - t * d).collect();
            if let Some(rt) = res(&trial) {
                if rt.iter().map(|v| v * v).sum::<f64>().sqrt() < norm {
                    x = trial;
                    improved = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    x
}

fn two_pulse_variant(cost: &CostSpec) -> Option<Variant> {
    let (a, b) = cost.second_order_weights()?;
    match (a > 0.0, b > 0.0) {
        (true, false) => Some(Variant::Accuracy),
        (false, true) => Some(Variant::Leakage),
        (true, true) if a == b => Some(Variant::Balanced),
        _ => None,
    }
}

/// Multistart Nelder–Mead over the free phases of an N-pulse design.
///
/// N = 2 with a cost that matches one of the analytic variants delegates to
/// [`design_two_pulse`]. N = 3…5 search the constrained families, N = 6…8
/// minimize a penalized cost and project the best point onto the constraints.
pub fn optimize_phases(
    n: usize,
    theta: f64,
    cost: &CostSpec,
    opts: &OptimizeOptions,
) -> Result<DesignResult, DesignError> {
    check_theta(theta)?;
    cost.validate()?;
    if opts.restarts == 0 {
        return Err(DesignError::NoRestarts);
    }
    let problem = match n {
        2 => {
            if let Some(v) = two_pulse_variant(cost) {
                return design_two_pulse(theta, v);
            }
            Problem::TwoPulse { theta }
        }
        3..=5 => Problem::Family(constrain_sequence(n, theta)?),
        6..=MAX_PULSES => Problem::Penalized { theta, n },
        _ => return Err(DesignError::BadPulseCount(n)),
    };
    let order = cost.max_order();
    let eval = Evaluator {
        problem,
        theta,
        cost,
        order,
    };
    let dim = eval.problem.dim();
    let nm = opts.nelder_mead();

    let runs: Vec<NelderMeadResult> = (0..opts.restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(i as u64);
            let x0: Vec<f64> = (0..dim).map(|_| rng.random_range(0.0..TAU)).collect();
            nelder_mead(|x| eval.objective(x), &x0, &nm)
        })
        .collect();

    let evals = runs.iter().map(|r| r.evals).sum();
    let (_, best) = runs
        .iter()
        .enumerate()
        .filter(|(_, r)| r.value.is_finite())
        .min_by(|a, b| a.1.value.total_cmp(&b.1.value).then(a.0.cmp(&b.0)))
        .ok_or(DesignError::Infeasible)?;

    let (set, method) = match eval.problem {
        Problem::Penalized { n, theta } => (
            absolute_phases(&project(&best.x, n, theta), n),
            "nelder-mead penalty + projection",
        ),
        Problem::TwoPulse { .. } => (
            eval.best_at(&best.x).ok_or(DesignError::Infeasible)?.0,
            "nelder-mead two-pulse",
        ),
        Problem::Family(_) => (
            eval.best_at(&best.x).ok_or(DesignError::Infeasible)?.0,
            "nelder-mead constrained family",
        ),
    };
    let sequence = set.sequence(theta)?;
    let series = extract_series(&sequence, order.max(2), DEFAULT_STEP)?;
    let final_cost = cost.evaluate(&series);
    let baseline = baseline_cost(theta, cost)?;
    let note = match eval.problem {
        Problem::Penalized { .. } => {
            let r = residual_norm2(&series, theta).sqrt();
            Some(format!("constraint residual after projection {r:.3e}"))
        }
        _ => None,
    };
    Ok(DesignResult {
        sequence,
        cost: final_cost,
        series,
        solver_report: SolverReport {
            method: method.to_string(),
            iterations: evals,
            restarts: opts.restarts,
            converged: best.converged,
            baseline_cost: baseline,
            non_improvement: final_cost >= baseline,
            note,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn quick(restarts: usize) -> OptimizeOptions {
        OptimizeOptions {
            restarts,
            max_evals: 800,
            ..Default::default()
        }
    }

    #[test]
    fn two_pulse_delegates() {
        let a = optimize_phases(2, 0.5, &CostSpec::second_order(), &quick(3)).unwrap();
        let b = design_two_pulse(0.5, Variant::Balanced).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn two_pulse_general_weights() {
        let cost = CostSpec {
            weights_c: vec![(2, 1.0)],
            weights_d: vec![(2, 3.0)],
        };
        let r = optimize_phases(2, 0.5, &cost, &quick(4)).unwrap();
        let grid = (0..20_000)
            .map(|i| {
                let s = cpx_series::closed_form_two_pulse(i as f64 * TAU / 20_000.0, 0.5);
                s.fc(2) + 3.0 * s.fd(2)
            })
            .fold(f64::INFINITY, f64::min);
        assert!(r.cost <= grid + 1e-6, "{} vs {grid}", r.cost);
    }

    #[test]
    fn rejects_bad_input() {
        let c = CostSpec::second_order();
        assert_eq!(
            optimize_phases(3, 0.5, &c, &quick(0)),
            Err(DesignError::NoRestarts)
        );
        assert_eq!(
            optimize_phases(9, 0.5, &c, &quick(1)),
            Err(DesignError::BadPulseCount(9))
        );
        assert_eq!(
            optimize_phases(1, 0.5, &c, &quick(1)),
            Err(DesignError::BadPulseCount(1))
        );
        assert!(matches!(
            optimize_phases(3, -0.1, &c, &quick(1)),
            Err(DesignError::BadTheta(_))
        ));
    }

    #[test]
    fn three_pulse_constraints_hold() {
        let r = optimize_phases(3, FRAC_PI_4, &CostSpec::second_order(), &quick(4)).unwrap();
        assert!((r.series.c0 - 0.5).abs() < 1e-8);
        assert!(r.series.c1.iter().all(|c| c.abs() < 1e-6));
        assert!((r.cost - CostSpec::second_order().evaluate(&r.series)).abs() < 1e-12);
        assert!(!r.solver_report.non_improvement);
    }

    #[test]
    fn six_pulse_projection() {
        let r = optimize_phases(6, FRAC_PI_4, &CostSpec::second_order(), &quick(2)).unwrap();
        assert!((r.series.c0 - 0.5).abs() < 1e-8, "c0 {}", r.series.c0);
        assert!(
            r.series.c1.iter().all(|c| c.abs() < 1e-6),
            "c1 {:?}",
            r.series.c1
        );
    }
}
