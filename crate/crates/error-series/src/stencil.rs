use std::collections::HashMap;

/// Central difference weights for the n-th derivative: (offset, weight) at unit step.
fn weights(n: u32) -> &'static [(i32, f64)] {
    match n {
        0 => &[(0, 1.0)],
        1 => &[(-1, -0.5), (1, 0.5)],
        2 => &[(-1, 1.0), (0, -2.0), (1, 1.0)],
        3 => &[(-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)],
        4 => &[(-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)],
        _ => unreachable!("derivative order checked by caller"),
    }
}

/// Larger steps for the higher orders keep round-off below truncation error.
pub(crate) fn step_for_order(l: usize, h: f64) -> f64 {
    match l {
        0..=2 => h,
        3 => 5.0 * h,
        _ => 10.0 * h,
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Memoizing evaluator; stencil points shared between coefficients and
/// between the two Richardson steps are evaluated once.
pub(crate) struct CachedEval<F> {
    f: F,
    cache: HashMap<(u64, u64), (f64, f64)>,
}

impl<F: Fn(f64, f64) -> (f64, f64)> CachedEval<F> {
    pub(crate) fn new(f: F) -> Self {
        CachedEval {
            f,
            cache: HashMap::new(),
        }
    }

    fn at(&mut self, x: f64, y: f64) -> (f64, f64) {
        let f = &self.f;
        *self
            .cache
            .entry((x.to_bits(), y.to_bits()))
            .or_insert_with(|| f(x, y))
    }

    fn partial(&mut self, i: u32, j: u32, s: f64) -> (f64, f64) {
        let (mut c, mut d) = (0.0, 0.0);
        for &(a, wa) in weights(i) {
            for &(b, wb) in weights(j) {
                let (pr, pe) = self.at(a as f64 * s, b as f64 * s);
                c += wa * wb * pr;
                d += wa * wb * pe;
            }
        }
        let scale = s.powi((i + j) as i32);
        (c / scale, d / scale)
    }

    /// Coefficient of ε₁ⁱε₂ʲ: Richardson-extrapolated partial over i!j!.
    pub(crate) fn coefficient(&mut self, i: u32, j: u32, s: f64) -> (f64, f64) {
        if i + j == 0 {
            return self.at(0.0, 0.0);
        }
        let (c1, d1) = self.partial(i, j, s);
        let (c2, d2) = self.partial(i, j, s / 2.0);
        let norm = factorial(i) * factorial(j);
        ((4.0 * c2 - c1) / 3.0 / norm, (4.0 * d2 - d1) / 3.0 / norm)
    }
}
