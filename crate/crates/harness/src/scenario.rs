//! Scenario file schema and validation.
//!
//! Scenarios are TOML documents. The full grammar (defaults in brackets):
//!
//! ```toml
//! name = "my-scenario"            # required
//!
//! [profile]                       # required
//! kind = "tanh_sweep"             # constant | linear_ramp | tanh_sweep
//!                                 #   | piecewise_constant_smoothed
//! omega_start = 1.0               # > 0
//! omega_end = 2.0                 # > 0 [omega_start]
//! center = 50.0                   # transition center [domain midpoint]
//! duration = 50.0                 # transition duration [1/10 of domain]
//! t_min = 0.0
//! t_max = 100.0
//!
//! [initial]                       # [default_g1]
//! kind = "default_g1"             # or "explicit" with u1, du1, u2, du2
//!
//! [integrator]
//! rel_tol = 1e-10                 # [1e-10]
//! abs_tol = 1e-12                 # [1e-12]
//!
//! [grid]
//! points = 2001                   # uniform samples over the domain [2001]
//!
//! [quantum]                       # optional: enables operator checks
//! dimension = 64                  # Fock dimension [64]
//! check_times = [0.0, 25.0]       # grid times [5 evenly spaced samples]
//! conjugation_times = [0.0, 25.0] # phase-shift conjugation probe times
//!                                 #   [check_times]
//! relation_time = 50.0            # Hamiltonian-relation probe [mid domain]
//! relation_dt = 2.5e-3            # central-difference step
//!                                 #   [1e-4 local periods]
//!
//! [phase]                         # optional: phase-operator checks
//! oracle_dimension = 9            # closed form vs quadrature block [9]
//! probe_alphas = [1.0, 2.0, 3.0]  # coherent probes [1, 2, 3]
//! eom_alpha = 2.0                 # phase-evolution probe amplitude [2.0]
//! eom_times = [0.0, 0.31]         # grid times [the quantum check times]
//!
//! [[checks]]                      # [all checks the sections above enable]
//! name = "wronskian_drift"        # must name a known check
//! tolerance = 1e-8                # positive; [per-check default]
//!
//! [[processes]]                   # optional: conversion-ledger processes
//! name = "sum-frequency"
//! arithmetic = "rational"         # rational | float
//! omega_out = "5/2"               # rational string or float
//! tolerance = "0"
//! gate = true                     # gate the relation [true]
//! [[processes.modes]]
//! id = "pump"
//! coefficient = 2                 # positive integer
//! omega = "1"                     # initial frequency
//! photons = "100"                 # initial photon number
//! ```

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;
use tdho_core::classical::{FrequencyProfile, InitialConditions, IntegratorSettings, ProfileKind};

/// Configuration failure with a field path.
#[derive(Debug)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error at `{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn err(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        field: field.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    profile: RawProfile,
    initial: Option<RawInitial>,
    integrator: Option<RawIntegrator>,
    grid: Option<RawGrid>,
    quantum: Option<RawQuantum>,
    phase: Option<RawPhase>,
    #[serde(default)]
    checks: Vec<RawCheck>,
    #[serde(default)]
    processes: Vec<RawProcess>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProfile {
    kind: String,
    omega_start: f64,
    omega_end: Option<f64>,
    center: Option<f64>,
    duration: Option<f64>,
    t_min: f64,
    t_max: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInitial {
    kind: String,
    u1: Option<f64>,
    du1: Option<f64>,
    u2: Option<f64>,
    du2: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIntegrator {
    rel_tol: Option<f64>,
    abs_tol: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    points: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuantum {
    dimension: Option<usize>,
    check_times: Option<Vec<f64>>,
    /// Times for the phase-shift conjugation check; defaults to
    /// `check_times`. The conjugation is truncation-limited to roughly
    /// 5e-7 per radian of accumulated phase at N = 64, so scenarios with
    /// many turns point it at early/mid-sweep samples.
    conjugation_times: Option<Vec<f64>>,
    relation_time: Option<f64>,
    relation_dt: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPhase {
    oracle_dimension: Option<usize>,
    probe_alphas: Option<Vec<f64>>,
    eom_alpha: Option<f64>,
    eom_times: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCheck {
    name: String,
    tolerance: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProcess {
    name: String,
    arithmetic: String,
    omega_out: toml::Value,
    tolerance: Option<toml::Value>,
    gate: Option<bool>,
    modes: Vec<RawMode>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMode {
    id: String,
    coefficient: u32,
    omega: toml::Value,
    photons: toml::Value,
}

/// Gate class of a catalogued check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckClass {
    Gated,
    Documented,
}

/// The known checks: (name, class, default tolerance, needs quantum, needs phase).
pub const CHECK_CATALOGUE: &[(&str, CheckClass, f64, bool, bool)] = &[
    ("wronskian_drift", CheckClass::Gated, 1e-8, false, false),
    ("ermakov_residual", CheckClass::Gated, 1e-5, false, false),
    ("invariant_identity", CheckClass::Gated, 1e-12, false, false),
    ("invariant_drift", CheckClass::Gated, 1e-8, false, false),
    ("rho_sq_omega", CheckClass::Gated, 1e-8, false, false),
    ("phase_consistency", CheckClass::Gated, 1e-8, false, false),
    (
        "adiabatic_deviation",
        CheckClass::Documented,
        0.0,
        false,
        false,
    ),
    (
        "linear_invariant_commutation",
        CheckClass::Gated,
        1e-8,
        true,
        false,
    ),
    ("invariant_two_forms", CheckClass::Gated, 1e-10, true, false),
    (
        "invariant_transported_drift",
        CheckClass::Gated,
        1e-7,
        true,
        false,
    ),
    (
        "invariant_matrix_drift",
        CheckClass::Documented,
        0.0,
        true,
        false,
    ),
    ("factorization", CheckClass::Gated, 1e-8, true, false),
    ("ladder_conjugation", CheckClass::Gated, 1e-6, true, false),
    ("squeeze_unitarity", CheckClass::Gated, 1e-8, true, false),
    ("hamiltonian_relation", CheckClass::Gated, 1e-4, true, false),
    ("ladder_rate", CheckClass::Documented, 0.0, true, false),
    ("phase_matrix_oracle", CheckClass::Gated, 1e-8, false, true),
    (
        "coherent_displacement",
        CheckClass::Gated,
        1e-9,
        false,
        true,
    ),
    ("coordinate_identity", CheckClass::Gated, 1e-8, true, true),
    ("number_phase_identity", CheckClass::Gated, 1e-8, true, true),
    (
        "excitation_energy_drift",
        CheckClass::Gated,
        1e-7,
        true,
        true,
    ),
    (
        "polar_decomposition",
        CheckClass::Documented,
        0.0,
        true,
        true,
    ),
    ("phase_commutator", CheckClass::Documented, 0.0, true, true),
    ("phase_eom", CheckClass::Documented, 0.0, true, true),
];

pub fn catalogue_entry(name: &str) -> Option<&'static (&'static str, CheckClass, f64, bool, bool)> {
    CHECK_CATALOGUE.iter().find(|(n, ..)| *n == name)
}

/// One enabled check with its resolved tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct EnabledCheck {
    pub name: String,
    pub class: CheckClass,
    pub tolerance: f64,
}

/// Exact or floating arithmetic for a ledger process.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arithmetic {
    Rational,
    Float,
}

/// A validated conversion process.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessScenario {
    pub name: String,
    pub arithmetic: Arithmetic,
    pub omega_out: BigRational,
    pub tolerance: BigRational,
    pub gate: bool,
    pub modes: Vec<ProcessModeScenario>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProcessModeScenario {
    pub id: String,
    pub coefficient: u32,
    pub omega: BigRational,
    pub photons: BigRational,
}

/// Quantum-check settings.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumSettings {
    pub dimension: usize,
    pub check_times: Vec<f64>,
    pub conjugation_times: Vec<f64>,
    pub relation_time: f64,
    pub relation_dt: f64,
}

/// Phase-check settings.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSettings {
    pub oracle_dimension: usize,
    pub probe_alphas: Vec<f64>,
    pub eom_alpha: f64,
    pub eom_times: Vec<f64>,
}

/// A fully validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub profile: FrequencyProfile,
    pub initial: InitialConditions,
    pub integrator: IntegratorSettings,
    pub grid_points: usize,
    pub quantum: Option<QuantumSettings>,
    pub phase: Option<PhaseSettings>,
    pub checks: Vec<EnabledCheck>,
    pub processes: Vec<ProcessScenario>,
}

impl Scenario {
    pub fn sample_times(&self) -> Vec<f64> {
        tdho_core::classical::uniform_grid(self.profile.t_min, self.profile.t_max, self.grid_points)
    }
}

fn parse_rational(value: &toml::Value, field: &str) -> Result<BigRational, ConfigError> {
    match value {
        toml::Value::Integer(i) => Ok(BigRational::from_integer(BigInt::from(*i))),
        toml::Value::Float(f) => BigRational::from_float(*f)
            .ok_or_else(|| err(field, format!("{f} is not a finite number"))),
        toml::Value::String(s) => {
            let text = s.trim();
            if let Some((num, den)) = text.split_once('/') {
                let num = BigInt::from_str(num.trim())
                    .map_err(|_| err(field, format!("bad numerator in `{text}`")))?;
                let den = BigInt::from_str(den.trim())
                    .map_err(|_| err(field, format!("bad denominator in `{text}`")))?;
                if den == BigInt::from(0) {
                    return Err(err(field, "denominator is zero"));
                }
                Ok(BigRational::new(num, den))
            } else {
                BigInt::from_str(text)
                    .map(BigRational::from_integer)
                    .map_err(|_| err(field, format!("`{text}` is not an integer or a/b fraction")))
            }
        }
        other => Err(err(
            field,
            format!("expected number or string, got {other}"),
        )),
    }
}

/// Snap a requested time onto the sample grid, within a loose tolerance.
fn snap_to_grid(t: f64, grid: &[f64], field: &str) -> Result<f64, ConfigError> {
    let spacing = grid[1] - grid[0];
    grid.iter()
        .find(|&&g| (g - t).abs() <= 0.5 * spacing * (1.0 + 1e-9))
        .copied()
        .ok_or_else(|| err(field, format!("time {t} is outside the sample grid")))
}

/// Parse and validate a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario, ConfigError> {
    let raw: RawScenario = toml::from_str(text).map_err(|e| err("<document>", e.to_string()))?;

    if raw.name.trim().is_empty() {
        return Err(err("name", "scenario name must be nonempty"));
    }

    let kind = match raw.profile.kind.as_str() {
        "constant" => ProfileKind::Constant,
        "linear_ramp" => ProfileKind::LinearRamp,
        "tanh_sweep" => ProfileKind::TanhSweep,
        "piecewise_constant_smoothed" => ProfileKind::PiecewiseConstantSmoothed,
        other => {
            return Err(err(
                "profile.kind",
                format!("unknown profile kind `{other}`"),
            ))
        }
    };
    let domain = raw.profile.t_max - raw.profile.t_min;
    if domain.is_nan() || domain <= 0.0 {
        return Err(err("profile.t_max", "domain must satisfy t_min < t_max"));
    }
    let omega_end = raw.profile.omega_end.unwrap_or(raw.profile.omega_start);
    let center = raw
        .profile
        .center
        .unwrap_or(raw.profile.t_min + 0.5 * domain);
    let duration = raw.profile.duration.unwrap_or(domain / 10.0);
    let profile = FrequencyProfile::new(
        kind,
        raw.profile.omega_start,
        omega_end,
        center,
        duration,
        raw.profile.t_min,
        raw.profile.t_max,
    )
    .map_err(|e| err("profile", e.to_string()))?;

    let initial = match raw.initial {
        None => InitialConditions::DefaultUnit,
        Some(init) => match init.kind.as_str() {
            "default_g1" => InitialConditions::DefaultUnit,
            "explicit" => {
                let get = |v: Option<f64>, f: &str| {
                    v.ok_or_else(|| err(f, "required for explicit initial conditions"))
                };
                InitialConditions::Explicit {
                    u1: get(init.u1, "initial.u1")?,
                    du1: get(init.du1, "initial.du1")?,
                    u2: get(init.u2, "initial.u2")?,
                    du2: get(init.du2, "initial.du2")?,
                }
            }
            other => {
                return Err(err(
                    "initial.kind",
                    format!("unknown initial-condition kind `{other}`"),
                ))
            }
        },
    };

    let mut integrator = IntegratorSettings::default();
    if let Some(raw_int) = &raw.integrator {
        if let Some(rt) = raw_int.rel_tol {
            if rt.is_nan() || rt <= 0.0 {
                return Err(err("integrator.rel_tol", "must be positive"));
            }
            integrator.rel_tol = rt;
        }
        if let Some(at) = raw_int.abs_tol {
            if at.is_nan() || at <= 0.0 {
                return Err(err("integrator.abs_tol", "must be positive"));
            }
            integrator.abs_tol = at;
        }
    }

    let grid_points = raw.grid.as_ref().map(|g| g.points).unwrap_or(2001);
    if grid_points < 5 {
        return Err(err("grid.points", "need at least 5 sample points"));
    }
    let grid = tdho_core::classical::uniform_grid(profile.t_min, profile.t_max, grid_points);

    let quantum = match &raw.quantum {
        None => None,
        Some(q) => {
            let dimension = q.dimension.unwrap_or(64);
            if dimension < 4 {
                return Err(err(
                    "quantum.dimension",
                    "Fock dimension must be at least 4",
                ));
            }
            let check_times = match &q.check_times {
                Some(times) => {
                    if times.is_empty() {
                        return Err(err("quantum.check_times", "must be nonempty"));
                    }
                    times
                        .iter()
                        .map(|&t| snap_to_grid(t, &grid, "quantum.check_times"))
                        .collect::<Result<Vec<_>, _>>()?
                }
                None => (0..5).map(|k| grid[k * (grid.len() - 1) / 4]).collect(),
            };
            let conjugation_times = match &q.conjugation_times {
                Some(times) => times
                    .iter()
                    .map(|&t| snap_to_grid(t, &grid, "quantum.conjugation_times"))
                    .collect::<Result<Vec<_>, _>>()?,
                None => check_times.clone(),
            };
            let relation_time = match q.relation_time {
                Some(t) => snap_to_grid(t, &grid, "quantum.relation_time")?,
                None => grid[grid.len() / 2],
            };
            let relation_dt = match q.relation_dt {
                Some(dt) => {
                    if dt.is_nan() || dt <= 0.0 {
                        return Err(err("quantum.relation_dt", "must be positive"));
                    }
                    dt
                }
                None => {
                    let omega = profile
                        .eval(relation_time)
                        .map_err(|e| err("quantum.relation_time", e.to_string()))?
                        .omega;
                    1e-4 * std::f64::consts::TAU / omega
                }
            };
            Some(QuantumSettings {
                dimension,
                check_times,
                conjugation_times,
                relation_time,
                relation_dt,
            })
        }
    };

    let phase = match &raw.phase {
        None => None,
        Some(p) => {
            if quantum.is_none() {
                return Err(err("phase", "phase checks require the [quantum] section"));
            }
            let oracle_dimension = p.oracle_dimension.unwrap_or(9);
            if oracle_dimension < 4 {
                return Err(err("phase.oracle_dimension", "must be at least 4"));
            }
            let probe_alphas = p.probe_alphas.clone().unwrap_or(vec![1.0, 2.0, 3.0]);
            let quarter = quantum.as_ref().map(|q| q.dimension / 4).unwrap_or(16);
            for &a in &probe_alphas {
                if a.is_nan() || a < 0.0 || a * a > quarter as f64 {
                    return Err(err(
                        "phase.probe_alphas",
                        format!("|α|² = {} exceeds the truncation-safe N/4", a * a),
                    ));
                }
            }
            let eom_alpha = p.eom_alpha.unwrap_or(2.0);
            let eom_times = match &p.eom_times {
                Some(times) => times
                    .iter()
                    .map(|&t| snap_to_grid(t, &grid, "phase.eom_times"))
                    .collect::<Result<Vec<_>, _>>()?,
                None => quantum
                    .as_ref()
                    .map(|q| q.check_times.clone())
                    .unwrap_or_default(),
            };
            Some(PhaseSettings {
                oracle_dimension,
                probe_alphas,
                eom_alpha,
                eom_times,
            })
        }
    };

    // Resolve checks: explicit list, or everything the sections enable.
    let checks = if raw.checks.is_empty() {
        CHECK_CATALOGUE
            .iter()
            .filter(|(_, _, _, needs_q, needs_p)| {
                (!needs_q || quantum.is_some()) && (!needs_p || phase.is_some())
            })
            .map(|(name, class, tol, _, _)| EnabledCheck {
                name: name.to_string(),
                class: *class,
                tolerance: *tol,
            })
            .collect()
    } else {
        let mut seen = BTreeSet::new();
        let mut enabled = Vec::with_capacity(raw.checks.len());
        for c in &raw.checks {
            let entry = catalogue_entry(&c.name)
                .ok_or_else(|| err("checks.name", format!("unknown check `{}`", c.name)))?;
            let (name, class, default_tol, needs_q, needs_p) = entry;
            if *needs_q && quantum.is_none() {
                return Err(err(
                    "checks",
                    format!("check `{name}` requires the [quantum] section"),
                ));
            }
            if *needs_p && phase.is_none() {
                return Err(err(
                    "checks",
                    format!("check `{name}` requires the [phase] section"),
                ));
            }
            if !seen.insert(c.name.clone()) {
                return Err(err("checks", format!("check `{name}` listed twice")));
            }
            let tolerance = match c.tolerance {
                Some(t) => {
                    if t.is_nan() || t <= 0.0 {
                        return Err(err(
                            "checks.tolerance",
                            format!("tolerance for `{name}` must be positive"),
                        ));
                    }
                    t
                }
                None => *default_tol,
            };
            enabled.push(EnabledCheck {
                name: name.to_string(),
                class: *class,
                tolerance,
            });
        }
        enabled
    };

    let mut processes = Vec::with_capacity(raw.processes.len());
    for p in &raw.processes {
        let arithmetic = match p.arithmetic.as_str() {
            "rational" => Arithmetic::Rational,
            "float" => Arithmetic::Float,
            other => {
                return Err(err(
                    "processes.arithmetic",
                    format!("unknown arithmetic `{other}`"),
                ))
            }
        };
        if p.modes.is_empty() {
            return Err(err("processes.modes", "a process needs input modes"));
        }
        let omega_out = parse_rational(&p.omega_out, "processes.omega_out")?;
        if omega_out <= BigRational::from_integer(0.into()) {
            return Err(err("processes.omega_out", "must be positive"));
        }
        let tolerance = match &p.tolerance {
            Some(v) => parse_rational(v, "processes.tolerance")?,
            None => BigRational::from_integer(0.into()),
        };
        if tolerance < BigRational::from_integer(0.into()) {
            return Err(err("processes.tolerance", "must be nonnegative"));
        }
        let mut modes = Vec::with_capacity(p.modes.len());
        for m in &p.modes {
            if m.coefficient == 0 {
                return Err(err(
                    "processes.modes.coefficient",
                    format!("mode `{}`: coefficient must be positive", m.id),
                ));
            }
            let omega = parse_rational(&m.omega, "processes.modes.omega")?;
            if omega <= BigRational::from_integer(0.into()) {
                return Err(err(
                    "processes.modes.omega",
                    format!("mode `{}`: frequency must be positive", m.id),
                ));
            }
            let photons = parse_rational(&m.photons, "processes.modes.photons")?;
            if photons < BigRational::from_integer(0.into()) {
                return Err(err(
                    "processes.modes.photons",
                    format!("mode `{}`: photon number must be nonnegative", m.id),
                ));
            }
            modes.push(ProcessModeScenario {
                id: m.id.clone(),
                coefficient: m.coefficient,
                omega,
                photons,
            });
        }
        processes.push(ProcessScenario {
            name: p.name.clone(),
            arithmetic,
            omega_out,
            tolerance,
            gate: p.gate.unwrap_or(true),
            modes,
        });
    }

    Ok(Scenario {
        name: raw.name,
        profile,
        initial,
        integrator,
        grid_points,
        quantum,
        phase,
        checks,
        processes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_scenario_gets_full_defaults() {
        let s = parse_scenario(
            r#"
            name = "minimal"
            [profile]
            kind = "constant"
            omega_start = 1.0
            t_min = 0.0
            t_max = 20.0
            "#,
        )
        .unwrap();
        assert_eq!(s.grid_points, 2001);
        assert_eq!(s.integrator.rel_tol, 1e-10);
        assert_eq!(s.integrator.abs_tol, 1e-12);
        assert!(matches!(s.initial, InitialConditions::DefaultUnit));
        assert!(s.quantum.is_none());
        // classical checks enabled by default
        assert!(s.checks.iter().any(|c| c.name == "wronskian_drift"));
        assert!(!s.checks.iter().any(|c| c.name == "factorization"));
    }

    #[test]
    fn sweep_parameters_round_trip() {
        let s = parse_scenario(
            r#"
            name = "sweep"
            [profile]
            kind = "tanh_sweep"
            omega_start = 1.0
            omega_end = 2.0
            center = 50.0
            duration = 50.0
            t_min = 0.0
            t_max = 100.0
            [quantum]
            dimension = 64
            "#,
        )
        .unwrap();
        assert_eq!(s.profile.omega_start, 1.0);
        assert_eq!(s.profile.omega_end, 2.0);
        assert_eq!(s.profile.center, 50.0);
        assert_eq!(s.profile.duration, 50.0);
        let q = s.quantum.unwrap();
        assert_eq!(q.dimension, 64);
        assert_eq!(q.check_times.len(), 5);
        assert_eq!(q.check_times[0], 0.0);
        assert_eq!(q.check_times[4], 100.0);
    }

    #[test]
    fn negative_frequency_is_rejected_with_field_path() {
        let e = parse_scenario(
            r#"
            name = "bad"
            [profile]
            kind = "tanh_sweep"
            omega_start = 1.0
            omega_end = -2.0
            t_min = 0.0
            t_max = 10.0
            "#,
        )
        .unwrap_err();
        assert!(e.field.contains("profile"), "{e}");
    }

    #[test]
    fn unknown_check_names_are_config_errors() {
        let e = parse_scenario(
            r#"
            name = "bad"
            [profile]
            kind = "constant"
            omega_start = 1.0
            t_min = 0.0
            t_max = 10.0
            [[checks]]
            name = "not_a_check"
            "#,
        )
        .unwrap_err();
        assert!(e.message.contains("not_a_check"));
    }

    #[test]
    fn nonpositive_tolerances_are_rejected() {
        let e = parse_scenario(
            r#"
            name = "bad"
            [profile]
            kind = "constant"
            omega_start = 1.0
            t_min = 0.0
            t_max = 10.0
            [[checks]]
            name = "wronskian_drift"
            tolerance = -1.0
            "#,
        )
        .unwrap_err();
        assert!(e.field.contains("tolerance"));
    }

    #[test]
    fn rational_values_parse_from_strings() {
        let s = parse_scenario(
            r#"
            name = "ledger"
            [profile]
            kind = "constant"
            omega_start = 1.0
            t_min = 0.0
            t_max = 1.0
            [grid]
            points = 11
            [[processes]]
            name = "sum"
            arithmetic = "rational"
            omega_out = "5/2"
            [[processes.modes]]
            id = "a"
            coefficient = 2
            omega = "1"
            photons = "100"
            [[processes.modes]]
            id = "b"
            coefficient = 1
            omega = "1/2"
            photons = "200"
            "#,
        )
        .unwrap();
        let p = &s.processes[0];
        assert_eq!(p.omega_out, BigRational::new(5.into(), 2.into()));
        assert_eq!(p.modes[1].omega, BigRational::new(1.into(), 2.into()));
        assert!(p.gate);
    }

    #[test]
    fn unknown_toml_keys_are_rejected() {
        let e = parse_scenario(
            r#"
            name = "bad"
            surprise = 3
            [profile]
            kind = "constant"
            omega_start = 1.0
            t_min = 0.0
            t_max = 10.0
            "#,
        )
        .unwrap_err();
        assert!(e.message.contains("surprise") || e.message.contains("unknown"));
    }

    #[test]
    fn phase_without_quantum_is_rejected() {
        let e = parse_scenario(
            r#"
            name = "bad"
            [profile]
            kind = "constant"
            omega_start = 1.0
            t_min = 0.0
            t_max = 10.0
            [phase]
            eom_alpha = 1.0
            "#,
        )
        .unwrap_err();
        assert!(e.field.contains("phase"));
    }
}
