//! Photon-number and power-density bookkeeping for frequency-conversion
//! processes.
//!
//! Each mode carries its invariant ω·n̂ through the conversion: evolving a
//! mode to a new frequency rescales the photon number so the energy is
//! preserved exactly. A process specification ties input modes with integer
//! stoichiometric coefficients to one output frequency; the conservation
//! report reproduces the power-density relation Σ cₖ Wₖ(tᵢ) = W(t_f), which
//! requires every input mode to carry the same energy (equivalently, all
//! modes share the final photon number) — a hypothesis this module checks
//! explicitly instead of assuming.
//!
//! All arithmetic is generic over [`LedgerValue`]: `f64` for ordinary runs
//! and `BigRational` for bit-exact verification.

use std::fmt::Display;

use num_rational::BigRational;
use num_traits::{Num, Signed};
use thiserror::Error;

/// Numeric field the ledger computes in.
pub trait LedgerValue: Clone + PartialOrd + Num + Signed + Display {
    /// Exact for rationals, relative 1e−12 for floats.
    fn ledger_eq(&self, other: &Self) -> bool;
    fn from_count(c: u32) -> Self;
}

impl LedgerValue for f64 {
    fn ledger_eq(&self, other: &Self) -> bool {
        let scale = self.abs().max(other.abs()).max(1.0);
        (self - other).abs() <= 1e-12 * scale
    }
    fn from_count(c: u32) -> Self {
        c as f64
    }
}

impl LedgerValue for BigRational {
    fn ledger_eq(&self, other: &Self) -> bool {
        self == other
    }
    fn from_count(c: u32) -> Self {
        BigRational::from_integer(c.into())
    }
}

#[derive(Debug, Error)]
pub enum LedgerError {
    #[error("mode `{id}`: frequency must be positive, got {value}")]
    InvalidFrequency { id: String, value: String },

    #[error("mode `{id}`: photon number must be nonnegative, got {value}")]
    InvalidPhotonNumber { id: String, value: String },

    #[error("mode `{id}`: stoichiometric coefficient must be positive")]
    InvalidCoefficient { id: String },

    #[error("mode `{id}`: final photon number requested before the mode was evolved")]
    FinalNumberUnset { id: String },

    #[error("process has no input modes")]
    EmptyProcess,

    #[error("frequency matching failed: Σ cω − ω_out = {residual} exceeds tolerance {tolerance}")]
    MatchingFailed { residual: String, tolerance: String },

    #[error("mode `{id}`: final frequency {omega_f} differs from the process output {omega_out}")]
    FinalFrequencyMismatch {
        id: String,
        omega_f: String,
        omega_out: String,
    },
}

/// One oscillator ensemble at a fixed pair of frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct Mode<T> {
    pub id: String,
    /// Frequency at the initial time (> 0).
    pub omega_i: T,
    /// Frequency at the final time (> 0).
    pub omega_f: T,
    /// Photon number (an expectation value) at the initial time (≥ 0).
    pub n_i: T,
    /// Photon number at the final time, set by [`evolve_mode`].
    pub n_f: Option<T>,
}

impl<T: LedgerValue> Mode<T> {
    pub fn new(id: impl Into<String>, omega_i: T, omega_f: T, n_i: T) -> Result<Self, LedgerError> {
        let id = id.into();
        if !omega_i.is_positive() {
            return Err(LedgerError::InvalidFrequency {
                id,
                value: omega_i.to_string(),
            });
        }
        if !omega_f.is_positive() {
            return Err(LedgerError::InvalidFrequency {
                id,
                value: omega_f.to_string(),
            });
        }
        if n_i.is_negative() {
            return Err(LedgerError::InvalidPhotonNumber {
                id,
                value: n_i.to_string(),
            });
        }
        Ok(Self {
            id,
            omega_i,
            omega_f,
            n_i,
            n_f: None,
        })
    }

    /// Energy ω·n at the initial time.
    pub fn energy_in(&self) -> T {
        self.omega_i.clone() * self.n_i.clone()
    }
}

/// Evolve a mode to its final frequency: n_f = ω_i·n_i/ω_f, so that ω·n is
/// preserved exactly.
pub fn evolve_mode<T: LedgerValue>(mode: &Mode<T>) -> Result<Mode<T>, LedgerError> {
    if !mode.omega_f.is_positive() {
        return Err(LedgerError::InvalidFrequency {
            id: mode.id.clone(),
            value: mode.omega_f.to_string(),
        });
    }
    let mut evolved = mode.clone();
    evolved.n_f = Some(mode.omega_i.clone() * mode.n_i.clone() / mode.omega_f.clone());
    Ok(evolved)
}

/// Which endpoint a power density refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimePoint {
    Initial,
    Final,
}

/// W = ω²·n at the requested endpoint.
pub fn power_density<T: LedgerValue>(mode: &Mode<T>, at: TimePoint) -> Result<T, LedgerError> {
    match at {
        TimePoint::Initial => Ok(mode.omega_i.clone() * mode.omega_i.clone() * mode.n_i.clone()),
        TimePoint::Final => {
            let n_f = mode.n_f.clone().ok_or(LedgerError::FinalNumberUnset {
                id: mode.id.clone(),
            })?;
            Ok(mode.omega_f.clone() * mode.omega_f.clone() * n_f)
        }
    }
}

/// Input modes with stoichiometric coefficients, one output frequency, and
/// the matching tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessSpec<T> {
    pub inputs: Vec<(u32, Mode<T>)>,
    pub omega_out: T,
    pub tolerance: T,
}

impl<T: LedgerValue> ProcessSpec<T> {
    pub fn new(
        inputs: Vec<(u32, Mode<T>)>,
        omega_out: T,
        tolerance: T,
    ) -> Result<Self, LedgerError> {
        if inputs.is_empty() {
            return Err(LedgerError::EmptyProcess);
        }
        for (c, mode) in &inputs {
            if *c == 0 {
                return Err(LedgerError::InvalidCoefficient {
                    id: mode.id.clone(),
                });
            }
        }
        if !omega_out.is_positive() {
            return Err(LedgerError::InvalidFrequency {
                id: "output".into(),
                value: omega_out.to_string(),
            });
        }
        Ok(Self {
            inputs,
            omega_out,
            tolerance,
        })
    }
}

/// Σ cₖωₖ(tᵢ) − ω_out. An error if it exceeds the tolerance, or if any mode
/// declares a final frequency other than the process output.
pub fn check_matching<T: LedgerValue>(spec: &ProcessSpec<T>) -> Result<T, LedgerError> {
    let mut sum = T::zero();
    for (c, mode) in &spec.inputs {
        if !mode.omega_f.ledger_eq(&spec.omega_out) {
            return Err(LedgerError::FinalFrequencyMismatch {
                id: mode.id.clone(),
                omega_f: mode.omega_f.to_string(),
                omega_out: spec.omega_out.to_string(),
            });
        }
        sum = sum + T::from_count(*c) * mode.omega_i.clone();
    }
    let residual = sum - spec.omega_out.clone();
    if residual.abs() > spec.tolerance {
        return Err(LedgerError::MatchingFailed {
            residual: residual.to_string(),
            tolerance: spec.tolerance.to_string(),
        });
    }
    Ok(residual)
}

/// Per-mode entry of a conservation report.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeLedgerEntry<T> {
    pub id: String,
    pub coefficient: u32,
    /// Input energy ωᵢ·nᵢ.
    pub energy_in: T,
    /// Energy after evolution, ω_f·n_f; equal to `energy_in` by construction.
    pub energy_out: T,
    /// Whether the per-mode energy check ωᵢnᵢ = ω_f·n_f holds.
    pub energy_conserved: bool,
    pub n_f: T,
    /// W at the initial time, ωᵢ²nᵢ.
    pub power_in: T,
    /// W at the final time, ω_out²·n_f.
    pub power_out: T,
}

/// Outcome of the power-density conservation chain for one process.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservationReport<T> {
    pub per_mode: Vec<ModeLedgerEntry<T>>,
    /// Σ cₖωₖ(tᵢ) − ω_out.
    pub matching_residual: T,
    /// Whether all input energies ωₖnₖ agree — the hypothesis under which
    /// the substitution into the matching relation is valid.
    pub equal_input_energies: bool,
    /// The common final photon number, when the hypothesis holds.
    pub shared_final_number: Option<T>,
    /// Σ cₖ Wₖ(tᵢ): the left side of the power-density relation.
    pub lhs_weighted_power: T,
    /// ω_out²·n_f: the right side, when the hypothesis holds.
    pub rhs_output_power: Option<T>,
    /// Whether lhs equals rhs (None when the hypothesis is violated: both
    /// sides are still reported per mode, nothing is asserted).
    pub relation_holds: Option<bool>,
    /// Reminder that the popular unweighted shorthand W₁ + W₂ = W(t_f)
    /// silently drops the stoichiometric coefficients.
    pub coefficient_note: &'static str,
}

const COEFFICIENT_NOTE: &str = "the unweighted power-density shorthand W1(ti) + W2(ti) = W1(tf) \
     is valid only when every stoichiometric coefficient is 1; the relation verified here is \
     the coefficient-weighted sum \u{3a3} c_k W_k(ti) = W(tf)";

/// Run the full conservation chain: match frequencies, evolve every mode to
/// ω_out, check the equal-energy hypothesis, and compare the two sides of
/// the power-density relation.
pub fn conservation_report<T: LedgerValue>(
    spec: &ProcessSpec<T>,
) -> Result<ConservationReport<T>, LedgerError> {
    let matching_residual = check_matching(spec)?;

    let mut per_mode = Vec::with_capacity(spec.inputs.len());
    for (c, mode) in &spec.inputs {
        let evolved = evolve_mode(mode)?;
        let n_f = evolved.n_f.clone().expect("set by evolve_mode");
        let energy_in = mode.energy_in();
        let energy_out = spec.omega_out.clone() * n_f.clone();
        per_mode.push(ModeLedgerEntry {
            id: mode.id.clone(),
            coefficient: *c,
            energy_conserved: energy_in.ledger_eq(&energy_out),
            power_in: power_density(mode, TimePoint::Initial)?,
            power_out: power_density(&evolved, TimePoint::Final)?,
            energy_in,
            energy_out,
            n_f,
        });
    }

    let first_energy = per_mode[0].energy_in.clone();
    let equal_input_energies = per_mode
        .iter()
        .all(|entry| entry.energy_in.ledger_eq(&first_energy));

    let mut lhs_weighted_power = T::zero();
    for entry in &per_mode {
        lhs_weighted_power =
            lhs_weighted_power + T::from_count(entry.coefficient) * entry.power_in.clone();
    }

    let (shared_final_number, rhs_output_power, relation_holds) = if equal_input_energies {
        let n_f = per_mode[0].n_f.clone();
        let rhs = spec.omega_out.clone() * spec.omega_out.clone() * n_f.clone();
        let holds = lhs_weighted_power.ledger_eq(&rhs);
        (Some(n_f), Some(rhs), Some(holds))
    } else {
        (None, None, None)
    };

    Ok(ConservationReport {
        per_mode,
        matching_residual,
        equal_input_energies,
        shared_final_number,
        lhs_weighted_power,
        rhs_output_power,
        relation_holds,
        coefficient_note: COEFFICIENT_NOTE,
    })
}
