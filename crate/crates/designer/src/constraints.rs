//! Phase families that satisfy C⁽⁰⁾ = sin²θ and C⁽¹⁾ = 0 by construction.
//!
//! Both constraints depend only on u_mn = α_mn − β_mn, so each family fixes
//! some of the β differences as functions of the free phases.

use crate::{check_theta, DesignError, PhaseSet};
use cpx_series::{first_order, first_order_five, zeroth_order};
use std::f64::consts::{FRAC_PI_4, PI, TAU};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConstrainedFamily {
    /// Free (α₁₂, α₂₃); β₁₂, β₂₃ follow from fixed offsets.
    Three { theta: f64 },
    /// Free (α₁₂, β₁₂, β₃₄, α₂₃); β₂₃ = α₂₃ − π and α₃₄ = α₁₂ − β₁₂ + β₃₄ − 2θ.
    Four { theta: f64 },
    /// Free (α₂, α₃, α₄, α₅, β₂, β₃); β₄, β₅ solved numerically.
    Five { theta: f64 },
}

pub fn constrain_sequence(n: usize, theta: f64) -> Result<ConstrainedFamily, DesignError> {
    check_theta(theta)?;
    match n {
        3 => Ok(ConstrainedFamily::Three { theta }),
        4 => Ok(ConstrainedFamily::Four { theta }),
        5 => Ok(ConstrainedFamily::Five { theta }),
        _ => Err(DesignError::BadPulseCount(n)),
    }
}

/// Offsets (u₁₂, u₂₃) of the three-pulse solution. The sign of u₁₂ flips at θ = π/4.
pub fn three_pulse_offsets(theta: f64) -> (f64, f64) {
    let root = (70.0 - 72.0 * (4.0 * theta).cos() + 2.0 * (8.0 * theta).cos())
        .max(0.0)
        .sqrt();
    let x1 = ((root - 4.0 * (2.0 * theta).sin().powi(2)) / 16.0).clamp(-1.0, 1.0);
    let x2 = ((2.0 * (4.0 * theta).cos() - 2.0 - root) / 16.0).clamp(-1.0, 1.0);
    let sign = if theta < FRAC_PI_4 { 1.0 } else { -1.0 };
    (sign * x1.acos(), x2.acos())
}

/// Number of samples per branch when bracketing the five-pulse roots.
const FIVE_SCAN: usize = 64;

impl ConstrainedFamily {
    pub fn theta(&self) -> f64 {
        match *self {
            ConstrainedFamily::Three { theta }
            | ConstrainedFamily::Four { theta }
            | ConstrainedFamily::Five { theta } => theta,
        }
    }

    pub fn pulses(&self) -> usize {
        match self {
            ConstrainedFamily::Three { .. } => 3,
            ConstrainedFamily::Four { .. } => 4,
            ConstrainedFamily::Five { .. } => 5,
        }
    }

    pub fn free_dim(&self) -> usize {
        match self {
            ConstrainedFamily::Three { .. } => 2,
            ConstrainedFamily::Four { .. } => 4,
            ConstrainedFamily::Five { .. } => 6,
        }
    }

    /// All phase sets of the family for the given free phases. Three and four
    /// pulses give exactly one; five pulses give every root found (possibly none).
    pub fn solutions(&self, free: &[f64]) -> Vec<PhaseSet> {
        assert_eq!(free.len(), self.free_dim(), "wrong number of free phases");
        match *self {
            ConstrainedFamily::Three { theta } => {
                let (a12, a23) = (free[0], free[1]);
                let (o12, o23) = three_pulse_offsets(theta);
                vec![PhaseSet::from_differences(
                    &[a12, a23],
                    &[a12 - o12, a23 - o23],
                )]
            }
            ConstrainedFamily::Four { theta } => {
                let (a12, b12, b34, a23) = (free[0], free[1], free[2], free[3]);
                let b23 = a23 - PI;
                let a34 = a12 - b12 + b34 - 2.0 * theta;
                vec![PhaseSet::from_differences(
                    &[a12, a23, a34],
                    &[b12, b23, b34],
                )]
            }
            ConstrainedFamily::Five { theta } => five_pulse_solutions(theta, free),
        }
    }
}

fn five_pulse_solutions(theta: f64, free: &[f64]) -> Vec<PhaseSet> {
    let (a2, a3, a4, a5, b2, b3) = (free[0], free[1], free[2], free[3], free[4], free[5]);
    let u12 = b2 - a2;
    let u23 = (a2 - a3) - (b2 - b3);
    let target = (2.0 * theta).cos();
    let (s12, c12) = u12.sin_cos();
    let (s23, c23) = u23.sin_cos();
    let a = s12 * s23;

    // C⁽⁰⁾ = sin²θ ⇔ A cos u₄₅ + B sin u₄₅ = cos 2θ, solved for u₄₅ on two branches.
    let u45_of = |u34: f64, branch: f64| -> Option<f64> {
        let b = c12 * u34.sin() + s12 * c23 * u34.cos();
        let r = a.hypot(b);
        if r < target.abs() || r == 0.0 {
            return None;
        }
        Some(b.atan2(a) + branch * (target / r).clamp(-1.0, 1.0).acos())
    };
    let c1 =
        |u34: f64, branch: f64| u45_of(u34, branch).map(|u45| first_order_five(u12, u23, u34, u45));

    let mut roots: Vec<(f64, f64)> = Vec::new();
    for branch in [1.0, -1.0] {
        let step = TAU / FIVE_SCAN as f64;
        let mut prev: Option<(f64, f64)> = None;
        for k in 0..=FIVE_SCAN {
            let x = k as f64 * step;
            let val = c1(x, branch);
            if let (Some((px, pv)), Some(v)) = (prev, val) {
                if pv == 0.0 {
                    roots.push((px, branch));
                } else if pv * v < 0.0 {
                    if let Some(root) = bisect(|t| c1(t, branch), px, x, pv) {
                        roots.push((root, branch));
                    }
                }
            }
            prev = val.map(|v| (x, v));
        }
    }

    let mut out = Vec::new();
    for (u34, branch) in roots {
        let Some(u45) = u45_of(u34, branch) else {
            continue;
        };
        let b4 = b3 - (a3 - a4) + u34;
        let b5 = b4 - (a4 - a5) + u45;
        let set = PhaseSet::new(vec![0.0, a2, a3, a4, a5], vec![0.0, b2, b3, b4, b5]);
        let c0 = zeroth_order(&set.alphas, &set.betas).unwrap_or(f64::NAN);
        let c1v = first_order(&set.alphas, &set.betas)
            .map(|c| c[0].abs())
            .unwrap_or(f64::NAN);
        if (c0 - theta.sin().powi(2)).abs() < 1e-10 && c1v < 1e-10 {
            out.push(set);
        }
    }
    out
}

/// Bisection on a bracketed sign change; `None` if the function becomes undefined.
fn bisect(f: impl Fn(f64) -> Option<f64>, mut lo: f64, mut hi: f64, mut flo: f64) -> Option<f64> {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 {
            return Some(mid);
        }
        if fm * flo < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use cpx_series::{extract_series, DEFAULT_STEP};
    use std::f64::consts::FRAC_PI_2;

    fn check(set: &PhaseSet, theta: f64, tol0: f64, tol1: f64) {
        let s = extract_series(&set.sequence(theta).unwrap(), 1, DEFAULT_STEP).unwrap();
        assert!(
            (s.c0 - theta.sin().powi(2)).abs() < tol0,
            "c0 {} vs {}",
            s.c0,
            theta.sin().powi(2)
        );
        assert!(
            s.c1[0].abs() < tol1 && s.c1[1].abs() < tol1,
            "c1 {:?}",
            s.c1
        );
    }

    #[test]
    fn three_pulse_family() {
        let theta = std::f64::consts::FRAC_PI_4;
        let fam = constrain_sequence(3, theta).unwrap();
        for free in [[0.3, 2.0], [4.0, 1.0]] {
            check(&fam.solutions(&free)[0], theta, 1e-8, 1e-8);
        }
        // θ = π/2 uses the other sign.
        let (o12, _) = three_pulse_offsets(FRAC_PI_2);
        assert!(o12 < 0.0);
        check(
            &constrain_sequence(3, FRAC_PI_2)
                .unwrap()
                .solutions(&[1.0, 2.5])[0],
            FRAC_PI_2,
            1e-8,
            1e-8,
        );
        check(
            &constrain_sequence(3, 0.2).unwrap().solutions(&[1.0, 2.5])[0],
            0.2,
            1e-8,
            1e-8,
        );
    }

    #[test]
    fn four_pulse_family() {
        for theta in [0.3, 0.9, FRAC_PI_2] {
            let fam = constrain_sequence(4, theta).unwrap();
            check(&fam.solutions(&[0.4, 2.2, 5.0, 1.3])[0], theta, 1e-8, 1e-6);
        }
    }

    #[test]
    fn five_pulse_family() {
        let theta = 0.8;
        let fam = constrain_sequence(5, theta).unwrap();
        let sols = fam.solutions(&[3.5, 1.2, 3.0, 6.0, 5.0, 4.8]);
        assert!(!sols.is_empty());
        for s in &sols {
            check(s, theta, 1e-8, 1e-6);
        }
    }

    #[test]
    fn unsupported_counts() {
        assert!(constrain_sequence(2, 0.5).is_err());
        assert!(constrain_sequence(6, 0.5).is_err());
    }
}
