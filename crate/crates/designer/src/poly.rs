use nalgebra::DMatrix;

/// Real roots of `c[0] xⁿ + c[1] xⁿ⁻¹ + … + c[n]` from the companion-matrix
/// eigenvalues. Leading coefficients that are negligible relative to the
/// largest one are dropped (roots at infinity). Eigenvalues with
/// |imag| < 1e-9 count as real and are polished by Newton steps.
pub fn real_roots(coeffs: &[f64]) -> Vec<f64> {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return vec![];
    }
    let start = coeffs
        .iter()
        .position(|c| c.abs() > 1e-14 * scale)
        .unwrap_or(coeffs.len());
    let c = &coeffs[start..];
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return vec![];
    }
    let mut companion = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        companion[(0, j)] = -c[j + 1] / c[0];
    }
    for i in 1..n {
        companion[(i, i - 1)] = 1.0;
    }
    let mut roots: Vec<f64> = companion
        .complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() < 1e-9)
        .map(|z| polish(c, z.re))
        .collect();
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots
}

fn polish(c: &[f64], mut x: f64) -> f64 {
    for _ in 0..8 {
        let (mut p, mut dp) = (0.0, 0.0);
        for &a in c {
            dp = dp * x + p;
            p = p * x + a;
        }
        if dp == 0.0 {
            break;
        }
        let step = p / dp;
        let next = x - step;
        if !next.is_finite() {
            break;
        }
        x = next;
        if step.abs() <= 1e-15 * x.abs().max(1.0) {
            break;
        }
    }
    x
}
