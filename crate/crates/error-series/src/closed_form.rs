//! Analytic coefficients for sequences of θₙ = π/4 resonant pulses.

use crate::{ErrorSeries, SeriesError};
use cpx_pulse::{ideal_population, CompositeSequence};
use std::f64::consts::{PI, SQRT_2};

/// Phases (α₁, α₂), (β₁, β₂) of the two-pulse sequence with α₁ = β₁ = 0,
/// the given α₁₂ = α₁ − α₂ and β₁₂ = α₁₂ − 2θ, which pins P_r⁽⁰⁾ = sin²θ.
pub fn two_pulse_phases(alpha12: f64, theta: f64) -> ([f64; 2], [f64; 2]) {
    ([0.0, -alpha12], [0.0, -(alpha12 - 2.0 * theta)])
}

/// Orders 0–2 of the two-pulse sequence with β₁₂ = α₁₂ − 2θ.
pub fn closed_form_two_pulse(alpha12: f64, theta: f64) -> ErrorSeries {
    let pi2 = PI * PI;
    let s = theta.sin();
    let x = (alpha12 - theta).sin();
    let ca = alpha12.cos();
    let cb = (alpha12 - 2.0 * theta).cos();
    let c2t = (2.0 * theta).cos();

    let c_mixed = s * (SQRT_2 / 8.0 * pi2 * x - (pi2 - 16.0) / 4.0 * s);
    let c_first =
        s * ((3.0 * SQRT_2 + 4.0) / 16.0 * pi2 * x - ((2.0 * SQRT_2 + 3.0) * pi2 + 16.0) / 8.0 * s);
    let c_second =
        s * ((3.0 * SQRT_2 - 4.0) / 16.0 * pi2 * x + ((2.0 * SQRT_2 - 3.0) * pi2 - 16.0) / 8.0 * s);

    let d_mixed = pi2 / 16.0 * (2.0 * (1.0 + SQRT_2) * ca + 2.0 * cb + SQRT_2 * c2t + 4.0 + SQRT_2);
    let d_first = pi2 / 32.0
        * (2.0 * (5.0 * SQRT_2 + 7.0) * ca
            + (6.0 + 4.0 * SQRT_2) * cb
            + (3.0 * SQRT_2 + 4.0) * c2t
            + 16.0
            + 11.0 * SQRT_2);
    let d_second = pi2 / 32.0
        * (2.0 * (SQRT_2 - 1.0) * ca
            + (6.0 - 4.0 * SQRT_2) * cb
            + (3.0 * SQRT_2 - 4.0) * c2t
            + 8.0
            - 5.0 * SQRT_2);

    ErrorSeries {
        order: 2,
        c0: s * s,
        c1: [0.0, 0.0],
        c2: [c_mixed, c_first, c_second],
        d0: 0.0,
        d1: [0.0, 0.0],
        d2: [d_mixed, d_first, d_second],
        higher: vec![],
    }
}

fn check_lengths(alphas: &[f64], betas: &[f64]) -> Result<(), SeriesError> {
    if alphas.len() != betas.len() {
        return Err(SeriesError::PhaseCountMismatch {
            alphas: alphas.len(),
            betas: betas.len(),
        });
    }
    Ok(())
}

/// u_mn = α_mn − β_mn with 1-based pulse indices.
fn relative<'a>(alphas: &'a [f64], betas: &'a [f64]) -> impl Fn(usize, usize) -> f64 + 'a {
    move |m, n| (alphas[m - 1] - alphas[n - 1]) - (betas[m - 1] - betas[n - 1])
}

/// C⁽⁰⁾ of a sequence of θₙ = π/4 pulses. Closed forms for 2–5 pulses,
/// composition otherwise.
pub fn zeroth_order(alphas: &[f64], betas: &[f64]) -> Result<f64, SeriesError> {
    check_lengths(alphas, betas)?;
    let u = relative(alphas, betas);
    let n = alphas.len();
    Ok(match n {
        2 => (u(1, 2) / 2.0).sin().powi(2),
        3 => 0.5 * (1.0 - u(1, 2).sin() * u(2, 3).sin()),
        4 => {
            let (u12, u23, u34) = (u(1, 2), u(2, 3), u(3, 4));
            0.5 * (1.0 + u23.cos() * u12.sin() * u34.sin() - u12.cos() * u34.cos())
        }
        5 => zeroth_order_five(u(1, 2), u(2, 3), u(3, 4), u(4, 5)),
        _ => {
            let seq = CompositeSequence::from_phases(0.0, alphas, betas)
                .map_err(|_| SeriesError::UnsupportedLength(n))?;
            ideal_population(&seq).0
        }
    })
}

/// C⁽⁰⁾ of five pulses in terms of the relative phases u_{n,n+1}.
pub fn zeroth_order_five(u12: f64, u23: f64, u34: f64, u45: f64) -> f64 {
    let a = u12.sin() * u23.sin();
    let b = u12.cos() * u34.sin() + u12.sin() * u23.cos() * u34.cos();
    0.5 * (1.0 - a * u45.cos() - b * u45.sin())
}

/// First-order coefficients (C⁽¹⁾₁, C⁽¹⁾₂) for 3–5 pulses of θₙ = π/4.
/// The two always have opposite signs.
pub fn first_order(alphas: &[f64], betas: &[f64]) -> Result<[f64; 2], SeriesError> {
    check_lengths(alphas, betas)?;
    let u = relative(alphas, betas);
    match alphas.len() {
        3 => {
            let (c12, c23) = (u(1, 2).cos(), u(2, 3).cos());
            let v = (c12 + c23 - c12 * c23) / SQRT_2;
            Ok([-v, v])
        }
        4 => {
            let (u12, u23, u34) = (u(1, 2), u(2, 3), u(3, 4));
            let v = -2.0
                * SQRT_2
                * (u12 / 2.0).sin()
                * (u34 / 2.0).sin()
                * u23.sin()
                * ((u12 + u34) / 2.0).sin();
            Ok([v, -v])
        }
        5 => {
            let s = first_order_five(u(1, 2), u(2, 3), u(3, 4), u(4, 5));
            Ok([-s, s])
        }
        n => Err(SeriesError::UnsupportedLength(n)),
    }
}

/// C⁽¹⁾₂ of five pulses in terms of the relative phases u_{n,n+1}.
pub fn first_order_five(u12: f64, u23: f64, u34: f64, u45: f64) -> f64 {
    let c = f64::cos;
    let (u13, u14, u15) = (u12 + u23, u12 + u23 + u34, u12 + u23 + u34 + u45);
    let (u24, u25, u35) = (u23 + u34, u23 + u34 + u45, u34 + u45);
    let total =
        -3.0 * c(u15) + c(u12 - u23 + u35) + c(u13 - u34 + u45) + c(u12 - u24 + u45) + c(u14 - u45)
            - 3.0 * c(u12 - u23 + u34 - u45)
            + 2.0 * (c(u23) - 1.0) * c(u12 - u35)
            + 2.0 * c(u14)
            + 2.0 * c(u12 - u23 + u34)
            - 2.0 * c(u13 - u34)
            - 2.0 * c(u12 - u24)
            - 2.0 * c(u13 + u45)
            + 2.0 * c(u25)
            - 2.0 * c(u12 - u23 + u45)
            - 2.0 * c(u13 - u45)
            - 2.0 * c(u12 - u23 - u45)
            - 2.0 * c(u12 + u35)
            - 2.0 * c(u12 - u34 + u45)
            - 2.0 * c(u12 + u34 - u45)
            + 4.0 * c(u12 + u34)
            + 4.0 * c(u12 - u34)
            + 4.0 * c(u12 + u45)
            + 4.0 * c(u12 - u45)
            + 2.0 * c(u23 - u34 + u45)
            - 2.0 * c(u24 - u45)
            - 2.0 * c(u23 - u35)
            + 4.0 * c(u23 + u45)
            + 4.0 * c(u23 - u45);
    total / (8.0 * SQRT_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn two_pulse_special_values() {
        let s = closed_form_two_pulse(0.0, 0.0);
        assert_eq!(s.c2, [0.0, 0.0, 0.0]);
        let pi2 = PI * PI;
        assert!((s.d2[0] - pi2 * (2.0 + SQRT_2) / 4.0).abs() < 1e-12);
        assert!((s.d2[1] - pi2 * (40.0 + 28.0 * SQRT_2) / 32.0).abs() < 1e-12);
        assert!((s.d2[1] - 24.550).abs() < 1e-3);
        let s = closed_form_two_pulse(1.3, 0.0);
        assert!(s.c2.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn zeroth_order_examples() {
        // u12 = u23 = π/2
        let a = [0.0, 0.4, 1.0];
        let b = [0.0, 0.4 + FRAC_PI_2, 1.0 + PI];
        assert!(zeroth_order(&a, &b).unwrap().abs() < 1e-15);
        // u12 = u34 = 0
        let a = [0.0, 0.7, 2.0, 3.1];
        let b = [0.0, 0.7, 5.5, 6.6];
        assert!(zeroth_order(&a, &b).unwrap().abs() < 1e-15);
        assert!(zeroth_order(&[0.0], &[0.0, 1.0]).is_err());
        assert!(first_order(&[0.0, 1.0], &[0.0, 2.0]).is_err());
    }
}
