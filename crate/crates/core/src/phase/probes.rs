//! Documented probes of the phase-operator relations.
//!
//! The commutation relation [Φ̂, Î] = −i cannot hold exactly in the number
//! basis (the commutator of anything with a diagonal Î has zero diagonal),
//! and the phase equation of motion dΦ̂/dt = −ω(t) is exact only operator
//! formally. These probes therefore *measure* deviations on semiclassical
//! states and record them; nothing here gates a run.

use num_complex::Complex64;

use crate::classical::{AmplitudePhaseSeries, Trajectory};
use crate::quantum::{
    commutator, ermakov_operator, invariant_ladder, matrix_exponential, squeeze_transform, CMat,
    FockSpace, LowBlockComparison,
};

use super::coherent::coherent_state;
use super::number::hermitian_sqrt;
use super::turski::PhaseOperator;
use super::PhaseError;

/// ⟨α|[Φ̂, Î]|α⟩ for one probe amplitude.
#[derive(Debug, Clone, Copy)]
pub struct CoherentCommutatorProbe {
    pub alpha: Complex64,
    pub expectation: Complex64,
    /// |⟨α|[Φ̂, Î]|α⟩ + i|.
    pub deviation: f64,
}

/// Measured behaviour of the phase/invariant commutator.
#[derive(Debug, Clone)]
pub struct PhaseCommutatorReport {
    /// [Φ̂, Î] + i·1 on the leading N/4-block.
    pub block: LowBlockComparison,
    /// Largest diagonal modulus of [Φ̂, Î] + i·1; exactly 1 in the number
    /// basis because the commutator's diagonal vanishes identically.
    pub diagonal_magnitude: f64,
    pub probes: Vec<CoherentCommutatorProbe>,
}

/// Probe [Φ̂, Î] against −i·1 with coherent states of growing amplitude.
/// `invariant_ref` must be diagonal in the number basis (the t₀ invariant).
pub fn check_phase_commutator(
    space: &FockSpace,
    phase: &PhaseOperator,
    invariant_ref: &CMat,
    probe_amplitudes: &[f64],
) -> Result<PhaseCommutatorReport, PhaseError> {
    let n = space.dim;
    let off_diag = {
        let mut m = invariant_ref.clone();
        for i in 0..n {
            m[(i, i)] = Complex64::new(0.0, 0.0);
        }
        crate::quantum::max_entry_norm(&m)
    };
    if off_diag > 1e-10 {
        return Err(PhaseError::ReferenceNotDiagonal { defect: off_diag });
    }

    let comm = commutator(&phase.matrix, invariant_ref)?;
    let shifted = &comm + CMat::identity(n, n) * Complex64::new(0.0, 1.0);
    let block = LowBlockComparison::max_entry(&shifted, n / 4);
    let diagonal_magnitude = (0..n).map(|i| shifted[(i, i)].norm()).fold(0.0, f64::max);

    let mut probes = Vec::with_capacity(probe_amplitudes.len());
    for &r in probe_amplitudes {
        let alpha = Complex64::new(r, 0.0);
        let state = coherent_state(space, alpha)?;
        let expectation = space.expectation(&comm, &state.coefficients);
        let deviation = (expectation + Complex64::new(0.0, 1.0)).norm();
        probes.push(CoherentCommutatorProbe {
            alpha,
            expectation,
            deviation,
        });
    }
    Ok(PhaseCommutatorReport {
        block,
        diagonal_magnitude,
        probes,
    })
}

/// One row of the number/phase evolution report.
#[derive(Debug, Clone, Copy)]
pub struct NumberPhaseRow {
    pub t: f64,
    pub omega: f64,
    /// ⟨n̂(t)⟩ on the probe state.
    pub number_expectation: f64,
    /// ⟨Φ̂(t)⟩ on the probe state.
    pub phase_expectation: f64,
    /// ⟨Î⟩ on the probe state.
    pub invariant_expectation: f64,
    /// Leading-block defect of the coordinate identity at this time.
    pub coordinate_defect: f64,
    /// N/4-block deviation of the polar factorization at this time.
    pub polar_defect: f64,
    /// Leading-block defect of Î − (ωn̂ + ½) at this time.
    pub number_identity_defect: f64,
    /// Central-difference rate of ⟨Φ̂(t)⟩ (interior times only).
    pub phase_rate: Option<f64>,
    /// |rate + ω(t)| (interior times only).
    pub rate_deviation: Option<f64>,
}

/// Heisenberg-picture evolution of the phase operator along a trajectory,
/// probed on one coherent state.
#[derive(Debug, Clone)]
pub struct NumberPhaseReport {
    pub alpha: Complex64,
    /// True for the vacuum probe, whose phase is undefined.
    pub degenerate_probe: bool,
    pub rows: Vec<NumberPhaseRow>,
    /// Max relative drift of ⟨n̂(t)⟩ω(t) across the rows (absolute drift for
    /// the vacuum probe).
    pub energy_drift: f64,
}

/// Evolve Φ̂(t) = e^{is_ρÎ} Φ̂ e^{−is_ρÎ}, differentiate its expectation on
/// the probe state, and compare the rate against −ω(t). The sample times
/// must be sample points of the series.
///
/// Phase expectations follow that sandwich on the bare probe state, exactly
/// as the operator is defined. Number and invariant expectations instead
/// evolve the probe by the transformed propagator ψ(t) = T̂†(t)e^{−is_ρÎ₀}|α⟩
/// (squeeze times phase shift): the number-like matrices rotate in the fixed
/// basis, and only along this evolution is ⟨n̂(t)⟩ω(t) the conserved energy
/// of the closed system.
pub fn phase_eom_probe(
    space: &FockSpace,
    traj: &Trajectory,
    series: &AmplitudePhaseSeries,
    phase: &PhaseOperator,
    alpha: Complex64,
    sample_times: &[f64],
) -> Result<NumberPhaseReport, PhaseError> {
    if (traj.g - 1.0).abs() > 1e-9 {
        return Err(PhaseError::Quantum(
            crate::quantum::QuantumError::UnsupportedNormalization { g: traj.g },
        ));
    }
    let state = coherent_state(space, alpha)?;
    let degenerate_probe = alpha.norm() == 0.0;
    let invariant0 = ermakov_operator(space, &traj.points[0])?.from_linear.matrix;
    let sqrt_invariant0 = hermitian_sqrt(&invariant0)?;
    let n = space.dim;
    let half = CMat::identity(n, n).scale(0.5);

    let mut rows: Vec<NumberPhaseRow> = Vec::with_capacity(sample_times.len());
    for &t in sample_times {
        let idx = traj.index_of(t).ok_or(PhaseError::TimeNotSampled { t })?;
        let point = &traj.points[idx];
        let record = &series.records[idx];

        let rotation =
            matrix_exponential(&invariant0.map(|c| c * Complex64::new(0.0, record.s_rho)))?;
        let phase_t = &rotation * &phase.matrix * rotation.adjoint();
        let phase_expectation = space.expectation(&phase_t, &state.coefficients).re;

        let ladder = invariant_ladder(space, point)?;
        let forms = ermakov_operator(space, point)?;
        let omega = record.omega;
        let number_matrix = (&ladder.time_raise * &ladder.time_lower).scale(1.0 / omega);

        let squeeze = squeeze_transform(space, record.rho, record.drho)?;
        let evolved = squeeze.matrix.adjoint() * (rotation.adjoint() * &state.coefficients);
        let number_expectation = evolved.dotc(&(&number_matrix * &evolved)).re;
        let invariant_expectation = evolved.dotc(&(&forms.from_linear.matrix * &evolved)).re;

        let reconstructed =
            (&ladder.time_lower + &ladder.time_raise).scale(1.0 / (2.0 * omega).sqrt());
        let coordinate_defect =
            LowBlockComparison::max_entry(&(&space.q - reconstructed), n - 1).value;

        let polar =
            &sqrt_invariant0 * matrix_exponential(&phase_t.map(|c| c * Complex64::new(0.0, -1.0)))?;
        let polar_defect =
            LowBlockComparison::max_entry(&(&ladder.time_lower - polar), n / 4).value;

        let identity_defect = LowBlockComparison::max_entry(
            &(&forms.from_linear.matrix - number_matrix.scale(omega) - &half),
            n - 1,
        )
        .value;

        rows.push(NumberPhaseRow {
            t,
            omega,
            number_expectation,
            phase_expectation,
            invariant_expectation,
            coordinate_defect,
            polar_defect,
            number_identity_defect: identity_defect,
            phase_rate: None,
            rate_deviation: None,
        });
    }

    for j in 1..rows.len().saturating_sub(1) {
        let dt = rows[j + 1].t - rows[j - 1].t;
        let rate = (rows[j + 1].phase_expectation - rows[j - 1].phase_expectation) / dt;
        rows[j].phase_rate = Some(rate);
        rows[j].rate_deviation = Some((rate + rows[j].omega).abs());
    }

    let e0 = rows
        .first()
        .map(|r| r.number_expectation * r.omega)
        .unwrap_or(0.0);
    let energy_drift = rows
        .iter()
        .map(|r| {
            let e = r.number_expectation * r.omega;
            if e0.abs() > 1e-12 {
                ((e - e0) / e0).abs()
            } else {
                (e - e0).abs()
            }
        })
        .fold(0.0, f64::max);

    Ok(NumberPhaseReport {
        alpha,
        degenerate_probe,
        rows,
        energy_drift,
    })
}
