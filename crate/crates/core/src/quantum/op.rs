//! Dense complex operator matrices with Hermiticity/unitarity metadata and
//! truncation-aware block comparisons.
//!
//! Identities that are exact in infinite dimension pick up defects near the
//! truncation edge, so every comparison here states the leading block it was
//! evaluated on; full-matrix comparisons use block = N.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::QuantumError;

pub type CMat = DMatrix<Complex64>;
pub type CVec = nalgebra::DVector<Complex64>;

/// Tolerance backing the `hermitian` metadata flag.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance backing the `unitary` metadata flag.
pub const UNITARY_TOL: f64 = 1e-10;

/// N×N complex matrix plus structure metadata and a provenance label.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub matrix: CMat,
    pub hermitian: bool,
    pub unitary: bool,
    pub label: String,
}

impl OperatorMatrix {
    /// Wrap a matrix without claiming any structure.
    pub fn general(label: impl Into<String>, matrix: CMat) -> Self {
        Self {
            matrix,
            hermitian: false,
            unitary: false,
            label: label.into(),
        }
    }

    /// Wrap a matrix and verify it is Hermitian before flagging it so.
    pub fn hermitian(label: impl Into<String>, matrix: CMat) -> Result<Self, QuantumError> {
        let label = label.into();
        let defect = max_entry_norm(&(&matrix - matrix.adjoint()));
        if defect > HERMITIAN_TOL {
            return Err(QuantumError::NotHermitian { label, defect });
        }
        Ok(Self {
            matrix,
            hermitian: true,
            unitary: false,
            label,
        })
    }

    /// Exponential of an anti-Hermitian generator; the result is verified
    /// unitary on the full matrix before the flag is set.
    pub fn unitary_from_generator(
        label: impl Into<String>,
        generator: &CMat,
    ) -> Result<Self, QuantumError> {
        let label = label.into();
        let anti = max_entry_norm(&(generator + generator.adjoint()));
        let scale = max_entry_norm(generator).max(1.0);
        if anti > 1e-10 * scale {
            return Err(QuantumError::NotAntiHermitian {
                label,
                defect: anti,
            });
        }
        let matrix = super::expm::matrix_exponential(generator)?;
        let n = matrix.nrows();
        let defect = max_entry_norm(&(matrix.adjoint() * &matrix - CMat::identity(n, n)));
        if defect > UNITARY_TOL {
            return Err(QuantumError::NotUnitary { label, defect });
        }
        Ok(Self {
            matrix,
            hermitian: false,
            unitary: true,
            label,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Norm used by a block comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockNorm {
    MaxEntry,
    Spectral,
}

/// Result of comparing an operator against zero on a leading block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowBlockComparison {
    /// Block size M; M = N marks a full-matrix comparison.
    pub block: usize,
    pub norm: BlockNorm,
    pub value: f64,
}

impl LowBlockComparison {
    /// Max-entry norm of the leading `block`×`block` corner of `m`.
    pub fn max_entry(m: &CMat, block: usize) -> Self {
        let b = block.min(m.nrows());
        let value = m
            .view((0, 0), (b, b))
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        Self {
            block: b,
            norm: BlockNorm::MaxEntry,
            value,
        }
    }

    /// Spectral norm (largest singular value) of the leading block.
    pub fn spectral(m: &CMat, block: usize) -> Self {
        let b = block.min(m.nrows());
        let view: CMat = m.view((0, 0), (b, b)).into();
        let value = view.singular_values()[0];
        Self {
            block: b,
            norm: BlockNorm::Spectral,
            value,
        }
    }
}

/// Largest entry modulus of the full matrix.
pub fn max_entry_norm(m: &CMat) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// AB − BA.
pub fn commutator(a: &CMat, b: &CMat) -> Result<CMat, QuantumError> {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() || a.nrows() != a.ncols() {
        return Err(QuantumError::DimensionMismatch {
            left: a.nrows(),
            right: b.nrows(),
        });
    }
    Ok(a * b - b * a)
}
