//! Phase operator, coherent states, and the number/phase identification.

mod coherent;
mod number;
mod probes;
mod turski;

pub use coherent::{coherent_state, displaced_vacuum, displacement_operator, CoherentState};
pub use number::{
    coordinate_polar_check, hermitian_sqrt, invariant_number_phase_check, number_operator,
    EnergyProbe, NumberPhaseIdentity, PolarCheckReport,
};
pub use probes::{
    check_phase_commutator, phase_eom_probe, CoherentCommutatorProbe, NumberPhaseReport,
    NumberPhaseRow, PhaseCommutatorReport,
};
pub use turski::{
    phase_operator, phase_operator_quadrature, PhaseNormalization, PhaseOperator, PhaseProvenance,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PhaseError {
    #[error("phase operator needs dimension ≥ {min}, got {dim}")]
    SpaceTooSmall { dim: usize, min: usize },

    #[error("|α|² = {alpha_sq:.3} exceeds the truncation-safe bound N/4 = {limit:.3}")]
    TruncationRisk { alpha_sq: f64, limit: f64 },

    #[error("reference invariant is not diagonal (off-diagonal max {defect:.3e})")]
    ReferenceNotDiagonal { defect: f64 },

    #[error("time {t} is not a sample point of the trajectory")]
    TimeNotSampled { t: f64 },

    #[error(transparent)]
    Quantum(#[from] crate::quantum::QuantumError),

    #[error(transparent)]
    Classical(#[from] crate::classical::ClassicalError),
}
