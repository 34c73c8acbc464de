//! Product basis of three four-level atoms and two truncated cavity modes.
//!
//! Atom levels are numbered 0, 1, 2 for |1⟩, |2⟩, |3⟩ and 3 for |e⟩. The index
//! of |a₁ a₂ a₃⟩|n_a, n_b⟩ is ((a₁·4 + a₂)·4 + a₃)·(cap+1)² + n_a·(cap+1) + n_b.

use cpx_quantum::{c64, StateVector};

pub const LEVELS: usize = 4;
pub const EXCITED: usize = 3;
pub const ATOMS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisState {
    pub atoms: [usize; ATOMS],
    pub na: usize,
    pub nb: usize,
}

impl BasisState {
    /// Eigenvalue of N̂_e: atoms in |1⟩ or |e⟩ plus photons in both modes.
    pub fn excitations(&self) -> usize {
        self.atoms
            .iter()
            .filter(|&&a| a == 0 || a == EXCITED)
            .count()
            + self.na
            + self.nb
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CavityBasis {
    pub photon_cap: usize,
}

impl CavityBasis {
    pub fn new(photon_cap: usize) -> Self {
        CavityBasis { photon_cap }
    }

    fn modes(&self) -> usize {
        self.photon_cap + 1
    }

    pub fn dim(&self) -> usize {
        LEVELS.pow(ATOMS as u32) * self.modes() * self.modes()
    }

    pub fn index(&self, s: BasisState) -> usize {
        let atom = (s.atoms[0] * LEVELS + s.atoms[1]) * LEVELS + s.atoms[2];
        atom * self.modes() * self.modes() + s.na * self.modes() + s.nb
    }

    pub fn state(&self, index: usize) -> BasisState {
        let m = self.modes();
        let nb = index % m;
        let na = (index / m) % m;
        let atom = index / (m * m);
        BasisState {
            atoms: [atom / 16, (atom / 4) % 4, atom % 4],
            na,
            nb,
        }
    }

    pub fn states(&self) -> impl Iterator<Item = BasisState> + '_ {
        (0..self.dim()).map(|i| self.state(i))
    }

    fn ket(&self, terms: &[([usize; 3], f64)]) -> StateVector {
        let mut v = StateVector::zeros(self.dim());
        for &(atoms, amp) in terms {
            v[self.index(BasisState {
                atoms,
                na: 0,
                nb: 0,
            })] += c64(amp, 0.0);
        }
        v
    }

    /// |Ψ₁⟩ = (|123⟩ − |132⟩)/√2 with both modes empty.
    pub fn psi1(&self) -> StateVector {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        self.ket(&[([0, 1, 2], s), ([0, 2, 1], -s)])
    }

    /// |Ψ₂⟩ = (|231⟩ − |213⟩ + |312⟩ − |321⟩)/2 with both modes empty.
    pub fn psi2(&self) -> StateVector {
        self.ket(&[
            ([1, 2, 0], 0.5),
            ([1, 0, 2], -0.5),
            ([2, 0, 1], 0.5),
            ([2, 1, 0], -0.5),
        ])
    }

    /// The three-atom singlet with both modes empty.
    pub fn singlet(&self) -> StateVector {
        let s = 1.0 / 6f64.sqrt();
        self.ket(&[
            ([0, 1, 2], s),
            ([0, 2, 1], -s),
            ([1, 2, 0], s),
            ([1, 0, 2], -s),
            ([2, 0, 1], s),
            ([2, 1, 0], -s),
        ])
    }

    /// Diagonal of the excitation-number operator N̂_e.
    pub fn excitation_numbers(&self) -> Vec<usize> {
        self.states().map(|s| s.excitations()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        for cap in [1, 2] {
            let b = CavityBasis::new(cap);
            assert_eq!(b.dim(), 64 * (cap + 1) * (cap + 1));
            for i in 0..b.dim() {
                assert_eq!(b.index(b.state(i)), i);
            }
        }
        assert_eq!(CavityBasis::new(1).dim(), 256);
        let single = CavityBasis::new(1)
            .excitation_numbers()
            .iter()
            .filter(|&&n| n <= 1)
            .count();
        assert_eq!(single, 48);
    }

    #[test]
    fn singlet_decomposes() {
        let b = CavityBasis::new(1);
        let s = b.singlet();
        let combo =
            b.psi1() * c64(1.0 / 3f64.sqrt(), 0.0) + b.psi2() * c64((2.0f64 / 3.0).sqrt(), 0.0);
        assert!((s - combo).norm() < 1e-15);
        assert!((b.psi1().norm() - 1.0).abs() < 1e-15 && (b.psi2().norm() - 1.0).abs() < 1e-15);
    }
}
