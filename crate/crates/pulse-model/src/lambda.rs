//! Exact evolution under a constant Λ Hamiltonian without numerical
//! diagonalization.
//!
//! With couplings g₁ = H[g][e], g₂ = H[r][e], the dark combination of |g⟩ and
//! |r⟩ is stationary while the bright state |b⟩ = (g₁|g⟩ + g₂|r⟩)/W,
//! W = √(|g₁|² + |g₂|²), rotates with |e⟩ under the 2×2 block [[0, W], [W, Δ]].

use crate::{DeviationPair, PulseParams};
use cpx_quantum::{c64, cis, ComplexMatrix, C64};

struct BrightRotation {
    /// Components of |b⟩ along |g⟩ and |r⟩; `None` when both couplings vanish.
    bright: Option<(C64, C64)>,
    /// Entries of exp(-i t [[0, W], [W, Δ]]).
    bb: C64,
    be: C64,
    ee: C64,
}

impl BrightRotation {
    fn new(g1: C64, g2: C64, delta: f64, t: f64) -> Self {
        let w = (g1.norm_sqr() + g2.norm_sqr()).sqrt();
        let global = cis(-delta * t / 2.0);
        if w == 0.0 {
            return BrightRotation {
                bright: None,
                bb: c64(1.0, 0.0),
                be: c64(0.0, 0.0),
                ee: cis(-delta * t),
            };
        }
        let rabi = (w * w + delta * delta / 4.0).sqrt();
        let (s, c) = (rabi * t).sin_cos();
        let sr = s / rabi;
        // exp(-i t H₂) = e^{-iΔt/2} [cos(Ωt) I - i sin(Ωt)/Ω (H₂ - Δ/2 I)]
        let bb = global * c64(c, sr * delta / 2.0);
        let ee = global * c64(c, -sr * delta / 2.0);
        let be = global * c64(0.0, -sr * w);
        BrightRotation {
            bright: Some((g1 / w, g2 / w)),
            bb,
            be,
            ee,
        }
    }

    fn apply(&self, psi: &mut [C64; 3]) {
        match self.bright {
            None => psi[2] *= self.ee,
            Some((bg, br)) => {
                let ab = bg.conj() * psi[0] + br.conj() * psi[1];
                let ae = psi[2];
                let nb = self.bb * ab + self.be * ae;
                let ne = self.be * ab + self.ee * ae;
                let shift = nb - ab;
                psi[0] += bg * shift;
                psi[1] += br * shift;
                psi[2] = ne;
            }
        }
    }
}

/// Evolves `psi` in place under the deviated pulse for time `t`.
pub fn apply_lambda_pulse(psi: &mut [C64; 3], p: &PulseParams, d: DeviationPair, t: f64) {
    let (g1, g2) = p.couplings(d);
    BrightRotation::new(g1, g2, p.delta, t).apply(psi);
}

/// `exp(-i H t)` for the deviated pulse Hamiltonian, built column by column.
pub fn lambda_propagator(p: &PulseParams, d: DeviationPair, t: f64) -> ComplexMatrix {
    let (g1, g2) = p.couplings(d);
    let rot = BrightRotation::new(g1, g2, p.delta, t);
    let mut u = ComplexMatrix::zeros(3, 3);
    for j in 0..3 {
        let mut col = [c64(0.0, 0.0); 3];
        col[j] = c64(1.0, 0.0);
        rot.apply(&mut col);
        for i in 0..3 {
            u[(i, j)] = col[i];
        }
    }
    u
}
