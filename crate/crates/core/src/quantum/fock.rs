//! Truncated Fock space of a reference oscillator at frequency ω₀.
//!
//! The basis is fixed once at the initial time; every time-dependent
//! operator in this crate is an N×N matrix over this basis. Truncation
//! artifacts live in the last row/column: [q̂, p̂] equals i·1 exactly on the
//! leading (N−1)-block and only the (N−1, N−1) corner entry deviates.

use num_complex::Complex64;

use super::op::{CMat, CVec, OperatorMatrix};
use super::QuantumError;

/// Truncated Fock space with its ladder and quadrature matrices.
#[derive(Debug, Clone)]
pub struct FockSpace {
    /// Dimension N of the truncation.
    pub dim: usize,
    /// Reference frequency ω₀ of the basis oscillator.
    pub omega0: f64,
    /// Wronskian constant the quantum checks are normalized to.
    pub g: f64,
    /// Annihilation operator: a|n⟩ = √n |n−1⟩.
    pub lower: CMat,
    /// Creation operator a†.
    pub raise: CMat,
    /// q̂ = (a + a†)/√(2ω₀).
    pub q: CMat,
    /// p̂ = i√(ω₀/2)(a† − a).
    pub p: CMat,
}

/// Build the reference space. `dim` must be at least 4.
pub fn build_fock(dim: usize, omega0: f64, g: f64) -> Result<FockSpace, QuantumError> {
    if dim < 4 {
        return Err(QuantumError::SpaceTooSmall { dim, min: 4 });
    }
    if omega0 <= 0.0 || !omega0.is_finite() {
        return Err(QuantumError::InvalidFrequency { omega: omega0 });
    }
    let mut lower = CMat::zeros(dim, dim);
    for n in 1..dim {
        lower[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    let raise = lower.adjoint();
    let q = (&lower + &raise).scale(1.0 / (2.0 * omega0).sqrt());
    let p = (&raise - &lower) * Complex64::new(0.0, (omega0 / 2.0).sqrt());
    Ok(FockSpace {
        dim,
        omega0,
        g,
        lower,
        raise,
        q,
        p,
    })
}

impl FockSpace {
    /// Number state |n⟩.
    pub fn number_state(&self, n: usize) -> CVec {
        let mut v = CVec::zeros(self.dim);
        v[n] = Complex64::new(1.0, 0.0);
        v
    }

    /// ⟨ψ|M|ψ⟩ for a normalized state.
    pub fn expectation(&self, m: &CMat, psi: &CVec) -> Complex64 {
        psi.dotc(&(m * psi))
    }

    /// Oscillator Hamiltonian ½(p̂² + Ω²q̂²) at frequency Ω.
    pub fn hamiltonian(&self, omega: f64) -> Result<OperatorMatrix, QuantumError> {
        if omega <= 0.0 || !omega.is_finite() {
            return Err(QuantumError::InvalidFrequency { omega });
        }
        let matrix = (&self.p * &self.p + (&self.q * &self.q).scale(omega * omega)).scale(0.5);
        OperatorMatrix::hermitian(format!("hamiltonian(omega={omega})"), matrix)
    }
}
