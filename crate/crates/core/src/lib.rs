//! Numerical laboratory for the time-dependent harmonic oscillator.
//!
//! The crate integrates the classical oscillator ü + Ω²(t)u = 0 for a pair
//! of independent solutions, builds the amplitude-phase representation and
//! its conserved quantities, mirrors the same structure as operator algebra
//! on a truncated Fock space (linear invariants, the quadratic invariant,
//! ladder and squeeze transformations), constructs a coherent-state phase
//! operator with its number-operator counterpart, and closes with exact
//! photon/power-density bookkeeping for frequency-conversion processes.
//!
//! ```
//! use tdho_core::classical::{
//!     amplitude_phase, classical_invariants, integrate_tdho, uniform_grid,
//!     FrequencyProfile, InitialConditions, IntegratorSettings,
//! };
//!
//! // sweep the frequency 1 -> 2 and watch the conserved quantities hold
//! let profile = FrequencyProfile::tanh_sweep(1.0, 2.0, 10.0, 8.0, 0.0, 20.0)?;
//! let traj = integrate_tdho(
//!     &profile,
//!     InitialConditions::DefaultUnit,
//!     IntegratorSettings::default(),
//!     &uniform_grid(0.0, 20.0, 801),
//! )?;
//! let series = amplitude_phase(&traj)?;
//! assert!(traj.max_wronskian_drift() <= 1e-8);
//! assert!(series.max_rho_sq_omega_defect() <= 1e-8);
//! assert!(classical_invariants(&traj).max_i_drift <= 1e-8);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
//!
//! All checks are pure functions over immutable values; distinct scenarios
//! can be evaluated concurrently without coordination.

pub mod classical;
pub mod ledger;
pub mod phase;
pub mod quantum;
pub mod report;

pub use classical::ClassicalError;
pub use ledger::LedgerError;
pub use phase::PhaseError;
pub use quantum::QuantumError;
