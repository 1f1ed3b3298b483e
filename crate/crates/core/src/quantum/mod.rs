//! Operator algebra of the oscillator on a truncated Fock space.

mod expm;
mod fock;
mod invariant;
mod op;
mod squeeze;

pub use expm::matrix_exponential;
pub use fock::{build_fock, FockSpace};
pub use invariant::{
    check_factorization, check_g_commutation, ermakov_operator, invariant_ladder,
    linear_invariant_ops, phase_shift_conjugation, ErmakovOperatorForms, FactorizationCheck,
    LadderOperators,
};
pub use op::{
    commutator, max_entry_norm, BlockNorm, CMat, CVec, LowBlockComparison, OperatorMatrix,
    HERMITIAN_TOL, UNITARY_TOL,
};
pub use squeeze::{
    check_invariant_constancy, check_invariant_hamiltonian_relation, ladder_rate_probe,
    squeeze_transform, HamiltonianRelationCheck, InvariantConstancy, LadderRateProbe,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuantumError {
    #[error("Fock dimension {dim} is below the minimum {min}")]
    SpaceTooSmall { dim: usize, min: usize },

    #[error("frequency must be positive and finite, got {omega}")]
    InvalidFrequency { omega: f64 },

    #[error("amplitude must be positive, got {rho}")]
    InvalidAmplitude { rho: f64 },

    #[error("operator dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("operator `{label}` fails its Hermiticity bound (defect {defect:.3e})")]
    NotHermitian { label: String, defect: f64 },

    #[error("generator for `{label}` is not anti-Hermitian (defect {defect:.3e})")]
    NotAntiHermitian { label: String, defect: f64 },

    #[error("operator `{label}` fails its unitarity bound (defect {defect:.3e})")]
    NotUnitary { label: String, defect: f64 },

    #[error("matrix has non-finite entries")]
    NonFiniteEntries,

    #[error("matrix exponential failed: {detail}")]
    ExponentialFailed { detail: String },

    #[error("probe time {t} ± {dt} falls outside the trajectory")]
    ProbeOutsideTrajectory { t: f64, dt: f64 },

    #[error("check is only defined for unit Wronskian normalization, got G = {g}")]
    UnsupportedNormalization { g: f64 },

    #[error(transparent)]
    Classical(#[from] crate::classical::ClassicalError),
}
