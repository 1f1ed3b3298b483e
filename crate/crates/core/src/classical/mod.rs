//! Classical side of the oscillator laboratory: frequency profiles,
//! integration of the solution pair, the amplitude-phase representation,
//! and the conserved quantities built from them.

mod integrate;
mod invariants;
mod phase;
mod profile;

pub use integrate::{
    integrate_tdho, uniform_grid, InitialConditions, IntegratorSettings, StepStatistics,
    Trajectory, TrajectoryPoint,
};
pub use invariants::{
    adiabatic_check, classical_invariants, ermakov_residual, fd_weights, InvariantReport,
    ResidualSeries,
};
pub use phase::{amplitude_phase, AmplitudePhaseSeries, PhaseRecord};
pub use profile::{FrequencyProfile, ProfileKind, ProfileSample};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassicalError {
    #[error("time {t} outside profile domain [{t_min}, {t_max}]")]
    OutOfDomain { t: f64, t_min: f64, t_max: f64 },

    #[error("invalid profile parameter {field} = {value}")]
    InvalidProfile { field: &'static str, value: f64 },

    #[error("solution pair is degenerate: initial Wronskian {wronskian} is zero")]
    DegeneratePair { wronskian: f64 },

    #[error("integration failed at t = {t} (step {step:e}): {detail}")]
    IntegrationFailure { t: f64, step: f64, detail: String },

    #[error("sample grid has {got} points, need at least {need}")]
    InsufficientGrid { got: usize, need: usize },

    #[error("sample grid is not strictly increasing at t = {t}")]
    NonMonotoneGrid { t: f64 },
}
