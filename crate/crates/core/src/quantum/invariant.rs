//! Invariant operators built from a classical solution pair.
//!
//! From a trajectory point (u₁, u̇₁, u₂, u̇₂) the linear invariants
//! Ĝ₁ = u₁p̂ − u̇₁q̂ and Ĝ₂ = −u₂p̂ + u̇₂q̂ are assembled, and from them the
//! quadratic invariant Î, the invariant ladder pair Â, Â† and the
//! time-dependent ladder pair â(t), â†(t). The two expansions of Î are
//! algebraically identical polynomials in q̂, p̂ (the coefficient identity
//! u̇₁² + u̇₂² = G²/ρ² + ρ̇² holds exactly), so their difference is compared
//! on the full matrix; genuinely truncation-sensitive identities are
//! compared on stated leading blocks.

use num_complex::Complex64;

use crate::classical::TrajectoryPoint;

use super::fock::FockSpace;
use super::op::{commutator, CMat, LowBlockComparison, OperatorMatrix};
use super::QuantumError;

/// Ĝ₁ = u₁p̂ − u̇₁q̂ and Ĝ₂ = −u₂p̂ + u̇₂q̂; both Hermitian.
pub fn linear_invariant_ops(
    space: &FockSpace,
    point: &TrajectoryPoint,
) -> Result<(OperatorMatrix, OperatorMatrix), QuantumError> {
    let g1 = space.p.scale(point.u1) - space.q.scale(point.du1);
    let g2 = space.q.scale(point.du2) - space.p.scale(point.u2);
    Ok((
        OperatorMatrix::hermitian("linear_invariant_1", g1)?,
        OperatorMatrix::hermitian("linear_invariant_2", g2)?,
    ))
}

/// Max-entry norm of [Ĝ₁, Ĝ₂] + iG·1 on the leading (N−1)-block, where G is
/// the Wronskian of the point.
pub fn check_g_commutation(
    space: &FockSpace,
    point: &TrajectoryPoint,
) -> Result<LowBlockComparison, QuantumError> {
    let (g1, g2) = linear_invariant_ops(space, point)?;
    let comm = commutator(&g1.matrix, &g2.matrix)?;
    let g = point.wronskian();
    let n = space.dim;
    let defect = comm + CMat::identity(n, n) * Complex64::new(0.0, g);
    Ok(LowBlockComparison::max_entry(&defect, n - 1))
}

/// The quadratic invariant in both of its sum-of-squares expansions.
#[derive(Debug, Clone)]
pub struct ErmakovOperatorForms {
    /// ½(Ĝ₁² + Ĝ₂²).
    pub from_linear: OperatorMatrix,
    /// ½[(Gq̂/ρ)² + (ρp̂ − ρ̇q̂)²].
    pub from_amplitude: OperatorMatrix,
    /// Full-matrix max-entry norm of the difference of the two forms.
    pub defect: LowBlockComparison,
}

/// Build Î both ways and compare them on the full matrix.
pub fn ermakov_operator(
    space: &FockSpace,
    point: &TrajectoryPoint,
) -> Result<ErmakovOperatorForms, QuantumError> {
    let rho = point.rho();
    if rho.is_nan() || rho <= 0.0 {
        return Err(QuantumError::InvalidAmplitude { rho });
    }
    let (g1, g2) = linear_invariant_ops(space, point)?;
    let from_linear = (&g1.matrix * &g1.matrix + &g2.matrix * &g2.matrix).scale(0.5);

    let g = point.wronskian();
    let drho = (point.u1 * point.du1 + point.u2 * point.du2) / rho;
    let scaled_q = space.q.scale(g / rho);
    let boosted_p = space.p.scale(rho) - space.q.scale(drho);
    let from_amplitude = (&scaled_q * &scaled_q + &boosted_p * &boosted_p).scale(0.5);

    let defect = LowBlockComparison::max_entry(&(&from_linear - &from_amplitude), space.dim);
    Ok(ErmakovOperatorForms {
        from_linear: OperatorMatrix::hermitian("invariant_from_linear", from_linear)?,
        from_amplitude: OperatorMatrix::hermitian("invariant_from_amplitude", from_amplitude)?,
        defect,
    })
}

/// Ladder operators of the invariant (Â) and of the instantaneous
/// amplitude-phase data (â(t)), with their adjoints.
#[derive(Debug, Clone)]
pub struct LadderOperators {
    /// Â = (Ĝ₁ − iĜ₂)/√2.
    pub invariant_lower: CMat,
    pub invariant_raise: CMat,
    /// â(t) = (Gq̂/ρ + i(ρp̂ − ρ̇q̂))/√2.
    pub time_lower: CMat,
    pub time_raise: CMat,
}

pub fn invariant_ladder(
    space: &FockSpace,
    point: &TrajectoryPoint,
) -> Result<LadderOperators, QuantumError> {
    let rho = point.rho();
    if rho.is_nan() || rho <= 0.0 {
        return Err(QuantumError::InvalidAmplitude { rho });
    }
    let (g1, g2) = linear_invariant_ops(space, point)?;
    let i = Complex64::new(0.0, 1.0);
    let inv_sqrt2 = Complex64::new(1.0 / 2.0f64.sqrt(), 0.0);
    let invariant_lower = (&g1.matrix - &g2.matrix * i) * inv_sqrt2;
    let invariant_raise = invariant_lower.adjoint();

    let g = point.wronskian();
    let drho = (point.u1 * point.du1 + point.u2 * point.du2) / rho;
    let scaled_q = space.q.scale(g / rho);
    let boosted_p = space.p.scale(rho) - space.q.scale(drho);
    let time_lower = (scaled_q + boosted_p * i) * inv_sqrt2;
    let time_raise = time_lower.adjoint();

    Ok(LadderOperators {
        invariant_lower,
        invariant_raise,
        time_lower,
        time_raise,
    })
}

/// Block norms of Î − â†â − (G/2)·1, Î − Â†Â − (G/2)·1, and of the
/// difference between the two number-like products.
#[derive(Debug, Clone, Copy)]
pub struct FactorizationCheck {
    pub time_form: LowBlockComparison,
    pub invariant_form: LowBlockComparison,
    pub forms_cross: LowBlockComparison,
}

/// Verify the factorization of the quadratic invariant through either
/// ladder pair on the leading (N−1)-block.
pub fn check_factorization(
    space: &FockSpace,
    point: &TrajectoryPoint,
) -> Result<FactorizationCheck, QuantumError> {
    let forms = ermakov_operator(space, point)?;
    let ladder = invariant_ladder(space, point)?;
    let n = space.dim;
    let g = point.wronskian();
    let half_g = CMat::identity(n, n) * Complex64::new(0.5 * g, 0.0);

    let time_number = &ladder.time_raise * &ladder.time_lower;
    let invariant_number = &ladder.invariant_raise * &ladder.invariant_lower;
    let inv = &forms.from_linear.matrix;

    let time_defect = inv - &time_number - &half_g;
    let invariant_defect = inv - &invariant_number - &half_g;
    let cross = &time_number - &invariant_number;

    Ok(FactorizationCheck {
        time_form: LowBlockComparison::max_entry(&time_defect, n - 1),
        invariant_form: LowBlockComparison::max_entry(&invariant_defect, n - 1),
        forms_cross: LowBlockComparison::max_entry(&cross, n - 1),
    })
}

/// Defect of the phase-shift conjugation e^{is_ρÎ} Â e^{−is_ρÎ} − â(t) on
/// the leading N/4-block (exponentials smear truncation error upward in n).
///
/// The phase-shift unitary is evaluated through the exact factorization
/// e^{is_ρÎ} = T̂† e^{is_ρÎ₀} T̂, with T̂ the squeeze that maps the evolving
/// invariant onto the reference Î₀ = a†a + ½. The reference exponential is
/// diagonal with exact half-integer phases at any s_ρ, so the truncation
/// error of the check stays uniform along the trajectory. Exponentiating
/// the directly assembled Î(t) instead degrades catastrophically once s_ρ
/// exceeds a few turns: the truncated squeezed quadratic form has faithful
/// eigenvalues only on roughly its lowest third, and the corrupted part of
/// the spectrum picks up O(1) phase errors that leak into the low block.
///
/// Only unit-Wronskian data is accepted: the squeeze factorization of the
/// invariant holds at G = 1.
pub fn phase_shift_conjugation(
    space: &FockSpace,
    point: &TrajectoryPoint,
    s_rho: f64,
) -> Result<LowBlockComparison, QuantumError> {
    let g = point.wronskian();
    if (g - 1.0).abs() > 1e-6 {
        return Err(QuantumError::UnsupportedNormalization { g });
    }
    let ladder = invariant_ladder(space, point)?;
    let rho = point.rho();
    let drho = (point.u1 * point.du1 + point.u2 * point.du2) / rho;
    let squeeze = super::squeeze::squeeze_transform(space, rho, drho)?;

    // exp(i s Î₀) entrywise: Î₀ is diagonal n + ½ (the corner entry (N−1)/2
    // is also a half-integer, so every phase is exact).
    let n = space.dim;
    let mut reference_phase = CMat::zeros(n, n);
    for k in 0..n {
        let level = if k + 1 == n {
            (n as f64 - 1.0) / 2.0
        } else {
            k as f64 + 0.5
        };
        reference_phase[(k, k)] = Complex64::from_polar(1.0, s_rho * level);
    }

    let forward = squeeze.matrix.adjoint() * reference_phase * &squeeze.matrix;
    let conjugated = &forward * &ladder.invariant_lower * forward.adjoint();
    let defect = conjugated - &ladder.time_lower;
    Ok(LowBlockComparison::max_entry(&defect, space.dim / 4))
}
