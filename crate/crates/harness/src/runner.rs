//! Execute a scenario: integrate, run every enabled check, evaluate the
//! conversion-ledger processes, and assemble the run report.

use std::fmt::Write as _;
use std::time::Instant;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::json;

use tdho_core::classical::{
    adiabatic_check, amplitude_phase, classical_invariants, ermakov_residual, integrate_tdho,
    AmplitudePhaseSeries, FrequencyProfile, StepStatistics, Trajectory,
};
use tdho_core::ledger::{conservation_report, ConservationReport, LedgerValue, Mode, ProcessSpec};
use tdho_core::phase::{
    check_phase_commutator, coherent_state, coordinate_polar_check, displaced_vacuum,
    invariant_number_phase_check, phase_eom_probe, phase_operator, phase_operator_quadrature,
    PhaseNormalization, PhaseOperator,
};
use tdho_core::quantum::{
    build_fock, check_g_commutation, check_invariant_constancy,
    check_invariant_hamiltonian_relation, ermakov_operator, phase_shift_conjugation,
    squeeze_transform, CMat, FockSpace, LowBlockComparison,
};
use tdho_core::report::{CheckRecord, CheckStatus};

use crate::scenario::{Arithmetic, CheckClass, ProcessScenario, Scenario};

/// Failure while executing a valid scenario (exit code 1).
#[derive(Debug)]
pub struct RunError(pub String);

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "run failed: {}", self.0)
    }
}

impl std::error::Error for RunError {}

fn run_err(e: impl std::fmt::Display) -> RunError {
    RunError(e.to_string())
}

/// Ledger process results with exact values rendered as num/den pairs.
#[derive(Debug, Clone, Serialize)]
pub struct ProcessReport {
    pub name: String,
    pub arithmetic: String,
    pub gated: bool,
    pub matching_residual: serde_json::Value,
    pub equal_input_energies: bool,
    pub shared_final_number: Option<serde_json::Value>,
    pub lhs_weighted_power: serde_json::Value,
    pub rhs_output_power: Option<serde_json::Value>,
    pub relation_holds: Option<bool>,
    pub per_mode: Vec<serde_json::Value>,
    pub coefficient_note: String,
}

/// Everything a run produces, minus the files.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub scenario: String,
    pub profile: FrequencyProfile,
    pub wronskian: f64,
    pub checks: Vec<CheckRecord>,
    pub processes: Vec<ProcessReport>,
    pub integrator: StepStatistics,
    /// "pass" iff no gated check failed.
    pub status: String,
    /// Path of the CSV series artifact, when one was written.
    pub series_csv: Option<String>,
    /// Excluded from determinism comparisons.
    pub wall_ms: f64,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

pub struct RunOutcome {
    pub report: RunReport,
    /// Rendered CSV series (written by the caller when artifacts are wanted).
    pub series_csv: String,
}

struct QuantumContext {
    space: FockSpace,
    /// Trajectory sample indices of the check times.
    check_indices: Vec<usize>,
    /// Indices for the phase-shift conjugation check.
    conjugation_indices: Vec<usize>,
    reference_invariant: CMat,
}

/// Execute the scenario.
pub fn run_scenario(scenario: &Scenario) -> Result<RunOutcome, RunError> {
    let started = Instant::now();
    let sample_times = scenario.sample_times();
    let traj = integrate_tdho(
        &scenario.profile,
        scenario.initial,
        scenario.integrator,
        &sample_times,
    )
    .map_err(run_err)?;
    let series = amplitude_phase(&traj).map_err(run_err)?;
    let residual = ermakov_residual(&series, &scenario.profile, traj.g).map_err(run_err)?;
    let invariants = classical_invariants(&traj);

    let quantum = match &scenario.quantum {
        None => None,
        Some(settings) => {
            let space = build_fock(settings.dimension, scenario.profile.omega_initial(), traj.g)
                .map_err(run_err)?;
            let indices_of = |times: &[f64]| {
                times
                    .iter()
                    .map(|&t| {
                        traj.index_of(t)
                            .ok_or_else(|| RunError(format!("check time {t} is not on the grid")))
                    })
                    .collect::<Result<Vec<_>, _>>()
            };
            let check_indices = indices_of(&settings.check_times)?;
            let conjugation_indices = indices_of(&settings.conjugation_times)?;
            let reference_invariant = ermakov_operator(&space, &traj.points[0])
                .map_err(run_err)?
                .from_linear
                .matrix;
            Some(QuantumContext {
                space,
                check_indices,
                conjugation_indices,
                reference_invariant,
            })
        }
    };

    let phase_op = match (&scenario.phase, &quantum) {
        (Some(_), Some(ctx)) => {
            Some(phase_operator(ctx.space.dim, PhaseNormalization::InversePi).map_err(run_err)?)
        }
        _ => None,
    };

    let mut checks: Vec<CheckRecord> = Vec::new();
    for enabled in &scenario.checks {
        evaluate_check(
            scenario,
            &traj,
            &series,
            residual.max_abs,
            &invariants,
            quantum.as_ref(),
            phase_op.as_ref(),
            enabled.name.as_str(),
            enabled.class,
            enabled.tolerance,
            &mut checks,
        )?;
    }

    let mut processes = Vec::with_capacity(scenario.processes.len());
    for p in &scenario.processes {
        let (report, record) = evaluate_process(p)?;
        checks.push(record);
        processes.push(report);
    }

    let status = if checks.iter().all(CheckRecord::passed) {
        "pass"
    } else {
        "fail"
    };

    let series_csv = render_series_csv(&traj, &series, &invariants.i_series, &residual.values);

    let report = RunReport {
        schema_version: 1,
        scenario: scenario.name.clone(),
        profile: scenario.profile,
        wronskian: traj.g,
        checks,
        processes,
        integrator: traj.stats,
        status: status.to_string(),
        series_csv: None,
        wall_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    Ok(RunOutcome { report, series_csv })
}

#[allow(clippy::too_many_arguments)]
fn evaluate_check(
    scenario: &Scenario,
    traj: &Trajectory,
    series: &AmplitudePhaseSeries,
    residual_max: f64,
    invariants: &tdho_core::classical::InvariantReport,
    quantum: Option<&QuantumContext>,
    phase_op: Option<&PhaseOperator>,
    name: &str,
    class: CheckClass,
    tolerance: f64,
    out: &mut Vec<CheckRecord>,
) -> Result<(), RunError> {
    let record = |value: f64, block: Option<usize>| match class {
        CheckClass::Gated => CheckRecord::gated(name, block, value, tolerance),
        CheckClass::Documented => CheckRecord::documented(name, block, value),
    };
    let ctx = || quantum.ok_or_else(|| RunError(format!("check `{name}` needs [quantum]")));
    let phi = || phase_op.ok_or_else(|| RunError(format!("check `{name}` needs [phase]")));

    match name {
        "wronskian_drift" => out.push(record(traj.max_wronskian_drift(), None)),
        "ermakov_residual" => out.push(record(residual_max, None)),
        "invariant_identity" => out.push(record(invariants.max_identity_defect, None)),
        "invariant_drift" => out.push(record(invariants.max_i_drift, None)),
        "rho_sq_omega" => out.push(record(series.max_rho_sq_omega_defect(), None)),
        "phase_consistency" => out.push(record(series.phase_defect_max, None)),
        "adiabatic_deviation" => {
            let dev = adiabatic_check(series, &scenario.profile).map_err(run_err)?;
            out.push(record(dev, None));
        }
        "linear_invariant_commutation" => {
            let ctx = ctx()?;
            let mut worst = 0.0f64;
            let mut block = 0;
            for &idx in &ctx.check_indices {
                let low = check_g_commutation(&ctx.space, &traj.points[idx]).map_err(run_err)?;
                worst = worst.max(low.value);
                block = low.block;
            }
            out.push(record(worst, Some(block)));
        }
        "invariant_two_forms" => {
            let ctx = ctx()?;
            let mut worst = 0.0f64;
            for &idx in &ctx.check_indices {
                let forms = ermakov_operator(&ctx.space, &traj.points[idx]).map_err(run_err)?;
                worst = worst.max(forms.defect.value);
            }
            out.push(record(worst, Some(ctx.space.dim)));
        }
        "invariant_transported_drift" | "invariant_matrix_drift" => {
            let ctx = ctx()?;
            let mut worst = LowBlockComparison {
                block: 0,
                norm: tdho_core::quantum::BlockNorm::MaxEntry,
                value: 0.0,
            };
            for &idx in &ctx.check_indices {
                let c = check_invariant_constancy(
                    &ctx.space,
                    &ctx.reference_invariant,
                    &traj.points[idx],
                )
                .map_err(run_err)?;
                let this = if name == "invariant_transported_drift" {
                    c.transported
                } else {
                    c.fixed_basis
                };
                if this.value >= worst.value {
                    worst = this;
                }
            }
            out.push(record(worst.value, Some(worst.block)));
        }
        "factorization" => {
            let ctx = ctx()?;
            let mut worst = 0.0f64;
            for &idx in &ctx.check_indices {
                let f = tdho_core::quantum::check_factorization(&ctx.space, &traj.points[idx])
                    .map_err(run_err)?;
                worst = worst
                    .max(f.time_form.value)
                    .max(f.invariant_form.value)
                    .max(f.forms_cross.value);
            }
            out.push(record(worst, Some(ctx.space.dim - 1)));
        }
        "ladder_conjugation" => {
            let ctx = ctx()?;
            let mut worst = 0.0f64;
            for &idx in &ctx.conjugation_indices {
                let low = phase_shift_conjugation(
                    &ctx.space,
                    &traj.points[idx],
                    series.records[idx].s_rho,
                )
                .map_err(run_err)?;
                worst = worst.max(low.value);
            }
            out.push(record(worst, Some(ctx.space.dim / 4)));
        }
        "squeeze_unitarity" => {
            let ctx = ctx()?;
            let n = ctx.space.dim;
            let mut worst = 0.0f64;
            for &idx in &ctx.check_indices {
                let r = &series.records[idx];
                let t = squeeze_transform(&ctx.space, r.rho, r.drho).map_err(run_err)?;
                let defect = t.matrix.adjoint() * &t.matrix - CMat::identity(n, n);
                worst = worst.max(LowBlockComparison::max_entry(&defect, n / 2).value);
            }
            out.push(record(worst, Some(n / 2)));
        }
        "hamiltonian_relation" => {
            let ctx = ctx()?;
            let settings = scenario.quantum.as_ref().expect("quantum context exists");
            let check = check_invariant_hamiltonian_relation(
                &ctx.space,
                traj,
                settings.relation_time,
                settings.relation_dt,
            )
            .map_err(run_err)?;
            out.push(record(check.defect.value, Some(check.defect.block)));
        }
        "ladder_rate" => {
            let ctx = ctx()?;
            let settings = scenario.quantum.as_ref().expect("quantum context exists");
            let probe = tdho_core::quantum::ladder_rate_probe(
                &ctx.space,
                traj,
                settings.relation_time,
                settings.relation_dt,
            )
            .map_err(run_err)?;
            out.push(CheckRecord::documented(
                "ladder_rate_plus_commutator",
                Some(probe.against_plus.block),
                probe.against_plus.value,
            ));
            out.push(CheckRecord::documented(
                "ladder_rate_minus_commutator",
                Some(probe.against_minus.block),
                probe.against_minus.value,
            ));
        }
        "phase_matrix_oracle" => {
            let settings = scenario.phase.as_ref().expect("phase settings exist");
            let dim = settings.oracle_dimension;
            let closed = phase_operator(dim, PhaseNormalization::InversePi).map_err(run_err)?;
            let quad =
                phase_operator_quadrature(dim, PhaseNormalization::InversePi).map_err(run_err)?;
            let element_defect =
                tdho_core::quantum::max_entry_norm(&(&closed.matrix - &quad.matrix));
            let value = element_defect
                .max(closed.hermiticity_defect())
                .max(closed.max_diagonal())
                .max(quad.hermiticity_defect())
                .max(quad.max_diagonal());
            out.push(record(value, Some(dim)));
        }
        "coherent_displacement" => {
            let ctx = ctx()?;
            let settings = scenario.phase.as_ref().expect("phase settings exist");
            let mut worst = 0.0f64;
            for &a in &settings.probe_alphas {
                let alpha = Complex64::new(a, 0.0);
                let closed = coherent_state(&ctx.space, alpha).map_err(run_err)?;
                let displaced = displaced_vacuum(&ctx.space, alpha).map_err(run_err)?;
                let defect = (&closed.coefficients - displaced)
                    .iter()
                    .map(|c| c.norm())
                    .fold(0.0, f64::max);
                worst = worst.max(defect);
            }
            out.push(record(worst, None));
        }
        "coordinate_identity" | "polar_decomposition" => {
            let ctx = ctx()?;
            let phi = phi()?;
            if name == "coordinate_identity" {
                let mut worst = 0.0f64;
                for &idx in &ctx.check_indices {
                    let r = coordinate_polar_check(&ctx.space, &traj.points[idx], phi)
                        .map_err(run_err)?;
                    worst = worst.max(r.coordinate_defect.value);
                }
                out.push(record(worst, Some(ctx.space.dim - 1)));
            } else {
                let r =
                    coordinate_polar_check(&ctx.space, &traj.points[0], phi).map_err(run_err)?;
                out.push(record(r.polar_defect.value, Some(r.polar_defect.block)));
            }
        }
        "number_phase_identity" => {
            let ctx = ctx()?;
            let mut worst = 0.0f64;
            for &idx in &ctx.check_indices {
                let r = invariant_number_phase_check(&ctx.space, &traj.points[idx], traj.g, &[])
                    .map_err(run_err)?;
                worst = worst.max(r.block_defect.value);
            }
            out.push(record(worst, Some(ctx.space.dim - 1)));
        }
        "excitation_energy_drift" => {
            let ctx = ctx()?;
            let phi = phi()?;
            let settings = scenario.phase.as_ref().expect("phase settings exist");
            let probe = phase_eom_probe(
                &ctx.space,
                traj,
                series,
                phi,
                Complex64::new(settings.eom_alpha, 0.0),
                &settings.eom_times,
            )
            .map_err(run_err)?;
            out.push(record(probe.energy_drift, None));
        }
        "phase_commutator" => {
            let ctx = ctx()?;
            let phi = phi()?;
            let settings = scenario.phase.as_ref().expect("phase settings exist");
            let report = check_phase_commutator(
                &ctx.space,
                phi,
                &ctx.reference_invariant,
                &settings.probe_alphas,
            )
            .map_err(run_err)?;
            out.push(CheckRecord::documented(
                name,
                Some(report.block.block),
                report.block.value,
            ));
            for probe in &report.probes {
                out.push(CheckRecord::documented(
                    format!("phase_commutator_alpha_{}", probe.alpha.re),
                    None,
                    probe.deviation,
                ));
            }
        }
        "phase_eom" => {
            let ctx = ctx()?;
            let phi = phi()?;
            let settings = scenario.phase.as_ref().expect("phase settings exist");
            let probe = phase_eom_probe(
                &ctx.space,
                traj,
                series,
                phi,
                Complex64::new(settings.eom_alpha, 0.0),
                &settings.eom_times,
            )
            .map_err(run_err)?;
            let deviations: Vec<f64> = probe.rows.iter().filter_map(|r| r.rate_deviation).collect();
            let best = deviations.iter().copied().fold(f64::INFINITY, f64::min);
            let worst = deviations.iter().copied().fold(0.0f64, f64::max);
            if deviations.is_empty() {
                return Err(RunError(
                    "phase_eom needs at least three probe times".to_string(),
                ));
            }
            out.push(CheckRecord::documented(name, None, best));
            out.push(CheckRecord::documented("phase_eom_worst", None, worst));
            let polar_worst = probe
                .rows
                .iter()
                .map(|r| r.polar_defect)
                .fold(0.0f64, f64::max);
            out.push(CheckRecord::documented(
                "phase_eom_polar_deviation",
                Some(ctx.space.dim / 4),
                polar_worst,
            ));
        }
        other => return Err(RunError(format!("unimplemented check `{other}`"))),
    }
    Ok(())
}

fn evaluate_process(p: &ProcessScenario) -> Result<(ProcessReport, CheckRecord), RunError> {
    match p.arithmetic {
        Arithmetic::Rational => {
            let inputs = p
                .modes
                .iter()
                .map(|m| {
                    Mode::new(
                        m.id.clone(),
                        m.omega.clone(),
                        p.omega_out.clone(),
                        m.photons.clone(),
                    )
                    .map(|mode| (m.coefficient, mode))
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(run_err)?;
            let spec = ProcessSpec::new(inputs, p.omega_out.clone(), p.tolerance.clone())
                .map_err(run_err)?;
            let report = conservation_report(&spec).map_err(run_err)?;
            Ok(build_process_report(
                p,
                &report,
                "rational",
                render_rational,
            ))
        }
        Arithmetic::Float => {
            let to_f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
            let inputs = p
                .modes
                .iter()
                .map(|m| {
                    Mode::new(
                        m.id.clone(),
                        to_f(&m.omega),
                        to_f(&p.omega_out),
                        to_f(&m.photons),
                    )
                    .map(|mode| (m.coefficient, mode))
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(run_err)?;
            let spec = ProcessSpec::new(inputs, to_f(&p.omega_out), to_f(&p.tolerance))
                .map_err(run_err)?;
            let report = conservation_report(&spec).map_err(run_err)?;
            Ok(build_process_report(p, &report, "float", render_float))
        }
    }
}

fn render_rational(value: &BigRational) -> serde_json::Value {
    json!({
        "num": value.numer().to_string(),
        "den": value.denom().to_string(),
    })
}

fn render_float(value: &f64) -> serde_json::Value {
    json!(value)
}

fn build_process_report<T: LedgerValue + ToPrimitive>(
    p: &ProcessScenario,
    report: &ConservationReport<T>,
    arithmetic: &str,
    render: fn(&T) -> serde_json::Value,
) -> (ProcessReport, CheckRecord) {
    let per_mode = report
        .per_mode
        .iter()
        .map(|m| {
            json!({
                "id": m.id,
                "coefficient": m.coefficient,
                "energy_in": render(&m.energy_in),
                "energy_out": render(&m.energy_out),
                "energy_conserved": m.energy_conserved,
                "n_f": render(&m.n_f),
                "power_in": render(&m.power_in),
                "power_out": render(&m.power_out),
            })
        })
        .collect();

    let all_energy_conserved = report.per_mode.iter().all(|m| m.energy_conserved);
    let holds = report.relation_holds == Some(true) && all_energy_conserved;
    // |lhs − rhs| as an f64 for the check table; −1 marks "hypothesis
    // violated, relation not evaluated" (avoids NaN in JSON).
    let gap = match &report.rhs_output_power {
        Some(rhs) => {
            let lhs = report.lhs_weighted_power.to_f64().unwrap_or(f64::MAX);
            (lhs - rhs.to_f64().unwrap_or(f64::MAX)).abs()
        }
        None => -1.0,
    };
    let record_name = format!("process_{}", p.name);
    let record = if p.gate {
        CheckRecord {
            name: record_name,
            block: None,
            value: gap,
            tolerance: Some(0.0),
            status: if holds {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
        }
    } else {
        CheckRecord::documented(record_name, None, gap)
    };

    let process_report = ProcessReport {
        name: p.name.clone(),
        arithmetic: arithmetic.to_string(),
        gated: p.gate,
        matching_residual: render(&report.matching_residual),
        equal_input_energies: report.equal_input_energies,
        shared_final_number: report.shared_final_number.as_ref().map(render),
        lhs_weighted_power: render(&report.lhs_weighted_power),
        rhs_output_power: report.rhs_output_power.as_ref().map(render),
        relation_holds: report.relation_holds,
        per_mode,
        coefficient_note: report.coefficient_note.to_string(),
    };
    (process_report, record)
}

/// Fixed-width scientific rendering: 17 significant digits.
fn fmt_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV columns: t,u1,du1,u2,du2,rho,drho,s_rho,omega,G,I,ermakov_residual.
/// The residual column is empty at the first and last two samples, where
/// the five-point stencil does not fit.
fn render_series_csv(
    traj: &Trajectory,
    series: &AmplitudePhaseSeries,
    i_series: &[f64],
    residuals: &[(f64, f64)],
) -> String {
    let mut out = String::with_capacity(traj.points.len() * 220);
    out.push_str("t,u1,du1,u2,du2,rho,drho,s_rho,omega,G,I,ermakov_residual\n");
    for (idx, (point, record)) in traj.points.iter().zip(series.records.iter()).enumerate() {
        let residual = idx
            .checked_sub(2)
            .and_then(|r| residuals.get(r))
            .filter(|(t, _)| (t - point.t).abs() <= 1e-12 * point.t.abs().max(1.0))
            .map(|(_, v)| fmt_value(*v))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt_value(point.t),
            fmt_value(point.u1),
            fmt_value(point.du1),
            fmt_value(point.u2),
            fmt_value(point.du2),
            fmt_value(record.rho),
            fmt_value(record.drho),
            fmt_value(record.s_rho),
            fmt_value(record.omega),
            fmt_value(point.wronskian()),
            fmt_value(i_series[idx]),
            residual,
        );
    }
    out
}
