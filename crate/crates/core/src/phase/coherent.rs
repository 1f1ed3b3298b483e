//! Coherent states of the reference oscillator.

use num_complex::Complex64;

use crate::quantum::{matrix_exponential, CVec, FockSpace, OperatorMatrix};

use super::PhaseError;

/// Displaced vacuum |α⟩ with Poissonian coefficients.
#[derive(Debug, Clone)]
pub struct CoherentState {
    pub alpha: Complex64,
    pub coefficients: CVec,
}

/// Closed-form coefficients e^{−|α|²/2} αⁿ/√(n!). Rejects amplitudes whose
/// photon number distribution reaches into the truncation region.
pub fn coherent_state(space: &FockSpace, alpha: Complex64) -> Result<CoherentState, PhaseError> {
    let limit = space.dim as f64 / 4.0;
    if alpha.norm_sqr() > limit {
        return Err(PhaseError::TruncationRisk {
            alpha_sq: alpha.norm_sqr(),
            limit,
        });
    }
    let mut coefficients = CVec::zeros(space.dim);
    let mut c = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    coefficients[0] = c;
    for n in 1..space.dim {
        c *= alpha / Complex64::new((n as f64).sqrt(), 0.0);
        coefficients[n] = c;
    }
    Ok(CoherentState {
        alpha,
        coefficients,
    })
}

/// Displacement operator D(α) = exp(αa† − α*a) built through the matrix
/// exponential; the independent route to the same state.
pub fn displacement_operator(
    space: &FockSpace,
    alpha: Complex64,
) -> Result<OperatorMatrix, PhaseError> {
    let generator = &space.raise * alpha - &space.lower * alpha.conj();
    OperatorMatrix::unitary_from_generator(format!("displacement({alpha})"), &generator)
        .map_err(PhaseError::from)
}

/// |α⟩ via the exponential route: D(α)|0⟩.
pub fn displaced_vacuum(space: &FockSpace, alpha: Complex64) -> Result<CVec, PhaseError> {
    let generator = &space.raise * alpha - &space.lower * alpha.conj();
    let d = matrix_exponential(&generator).map_err(PhaseError::from)?;
    Ok(d.column(0).into_owned())
}
