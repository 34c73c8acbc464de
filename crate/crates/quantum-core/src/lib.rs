//! Complex matrices, state vectors and density matrices shared by the
//! pulse, designer and cavity crates.
//!
//! Everything is double precision and dense. Matrices are `nalgebra`
//! dynamic matrices over `Complex<f64>`; the aliases below only name the
//! role a matrix plays.

use nalgebra::{Complex, DMatrix, DVector};
use thiserror::Error;

pub type C64 = Complex<f64>;
pub type ComplexMatrix = DMatrix<C64>;
pub type StateVector = DVector<C64>;
pub type DensityMatrix = DMatrix<C64>;

/// Entrywise tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Max-norm tolerance on `M†M - I` for unitary matrices.
pub const UNITARY_TOL: f64 = 1e-10;
/// Norm drift allowed for states after unitary evolution.
pub const NORM_TOL: f64 = 1e-10;
/// Trace drift allowed for density matrices under dissipative evolution.
pub const TRACE_TOL: f64 = 1e-8;
/// Most negative eigenvalue accepted for a density matrix.
pub const POSITIVITY_TOL: f64 = 1e-8;

#[derive(Debug, Error, PartialEq)]
pub enum QuantumError {
    #[error("matrix is not Hermitian: max |H - H†| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("state is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },
}

pub fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// `e^{i phi}`.
pub fn cis(phi: f64) -> C64 {
    let (s, c) = phi.sin_cos();
    Complex::new(c, s)
}

/// Largest entry magnitude.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest entry of `|M - M†|`.
pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

pub fn is_hermitian(m: &ComplexMatrix, tol: f64) -> bool {
    m.is_square() && hermitian_deviation(m) <= tol
}

/// Largest entry of `|M†M - I|`.
pub fn unitarity_deviation(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    let g = m.adjoint() * m;
    max_abs(&(g - ComplexMatrix::identity(n, n)))
}

pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> bool {
    m.is_square() && unitarity_deviation(m) <= tol
}

fn check_hermitian(h: &ComplexMatrix) -> Result<(), QuantumError> {
    if !h.is_square() {
        return Err(QuantumError::NotSquare {
            rows: h.nrows(),
            cols: h.ncols(),
        });
    }
    let deviation = hermitian_deviation(h);
    // Absolute tolerance for unit-scale generators, relative for large couplings.
    if deviation > HERMITIAN_TOL * max_abs(h).max(1.0) {
        return Err(QuantumError::NotHermitian { deviation });
    }
    Ok(())
}

/// Eigendecomposition `H = V diag(d) V†` of a Hermitian matrix.
///
/// The input is symmetrized before decomposition so round-off in the lower
/// triangle does not leak into the eigenvectors.
pub fn eigh(h: &ComplexMatrix) -> Result<(DVector<f64>, ComplexMatrix), QuantumError> {
    check_hermitian(h)?;
    let sym = (h + h.adjoint()) * c64(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    Ok((eig.eigenvalues, eig.eigenvectors))
}

/// `exp(-i H t)` for Hermitian `H` via its eigendecomposition.
pub fn hermitian_expm(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix, QuantumError> {
    let (d, v) = eigh(h)?;
    let mut vd = v.clone();
    for (j, &dj) in d.iter().enumerate() {
        let phase = cis(-dj * t);
        for i in 0..vd.nrows() {
            vd[(i, j)] *= phase;
        }
    }
    Ok(vd * v.adjoint())
}

/// Computational basis vector `|index⟩` of dimension `dim`.
pub fn basis_state(dim: usize, index: usize) -> StateVector {
    let mut v = StateVector::zeros(dim);
    v[index] = c64(1.0, 0.0);
    v
}

/// `|psi⟩⟨psi|`.
pub fn pure_density(psi: &StateVector) -> DensityMatrix {
    psi * psi.adjoint()
}

fn check_normalized(v: &StateVector) -> Result<(), QuantumError> {
    let norm = v.norm();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(QuantumError::NotNormalized { norm });
    }
    Ok(())
}

/// `|⟨a|b⟩|²`, clamped to [0, 1].
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64, QuantumError> {
    if a.len() != b.len() {
        return Err(QuantumError::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    check_normalized(a)?;
    check_normalized(b)?;
    Ok(a.dotc(b).norm_sqr().clamp(0.0, 1.0))
}

/// `⟨target|ρ|target⟩`.
pub fn fidelity_mixed(rho: &DensityMatrix, target: &StateVector) -> Result<f64, QuantumError> {
    if !rho.is_square() {
        return Err(QuantumError::NotSquare {
            rows: rho.nrows(),
            cols: rho.ncols(),
        });
    }
    if rho.nrows() != target.len() {
        return Err(QuantumError::DimensionMismatch {
            left: rho.nrows(),
            right: target.len(),
        });
    }
    check_normalized(target)?;
    Ok(target.dotc(&(rho * target)).re.clamp(0.0, 1.0))
}

pub fn trace(m: &ComplexMatrix) -> C64 {
    m.diagonal().sum()
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64, QuantumError> {
    let (d, _) = eigh(m)?;
    Ok(d.iter().cloned().fold(f64::INFINITY, f64::min))
}

/// Checks the density-matrix invariants: Hermitian, unit trace, positive.
pub fn check_density(
    rho: &DensityMatrix,
    trace_tol: f64,
    positivity_tol: f64,
) -> Result<(), String> {
    let dev = hermitian_deviation(rho);
    if dev > 1e-10 {
        return Err(format!("not Hermitian (deviation {dev:.3e})"));
    }
    let tr = trace(rho);
    if (tr.re - 1.0).abs() > trace_tol || tr.im.abs() > trace_tol {
        return Err(format!("trace {tr} differs from 1"));
    }
    let lo = min_eigenvalue(rho).map_err(|e| e.to_string())?;
    if lo < -positivity_tol {
        return Err(format!("negative eigenvalue {lo:.3e}"));
    }
    Ok(())
}

/// Global phase `e^{iφ}` that best aligns `b` onto `a` in the least-squares sense.
pub fn best_phase(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    let s: C64 = a.iter().zip(b.iter()).map(|(x, y)| y.conj() * x).sum();
    if s.norm() == 0.0 {
        c64(1.0, 0.0)
    } else {
        s / s.norm()
    }
}

/// Max entry error between `a` and `b` after removing the best global phase.
pub fn phase_gauged_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let p = best_phase(a, b);
    max_abs(&(a - b * p))
}
