//! Dense matrix exponential.
//!
//! Hermitian and anti-Hermitian arguments go through an eigendecomposition
//! (the only cases this crate actually produces); everything else falls back
//! to Padé scaling-and-squaring.

use nalgebra::linalg::SymmetricEigen;
use num_complex::Complex64;

use super::op::{max_entry_norm, CMat};
use super::QuantumError;

/// Relative tolerance for classifying a matrix as (anti-)Hermitian.
const STRUCTURE_TOL: f64 = 1e-13;

/// e^A.
pub fn matrix_exponential(a: &CMat) -> Result<CMat, QuantumError> {
    if a.nrows() != a.ncols() {
        return Err(QuantumError::DimensionMismatch {
            left: a.nrows(),
            right: a.ncols(),
        });
    }
    if a.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(QuantumError::NonFiniteEntries);
    }
    let scale = max_entry_norm(a);
    if scale == 0.0 {
        let n = a.nrows();
        return Ok(CMat::identity(n, n));
    }
    let herm_defect = max_entry_norm(&(a - a.adjoint()));
    if herm_defect <= STRUCTURE_TOL * scale {
        return exp_hermitian(a, |lambda| Complex64::new(lambda.exp(), 0.0));
    }
    let anti_defect = max_entry_norm(&(a + a.adjoint()));
    if anti_defect <= STRUCTURE_TOL * scale {
        // A = iH with H = -iA Hermitian; e^A = V e^{i\lambda} V^†.
        let h = a.map(|c| c * Complex64::new(0.0, -1.0));
        return exp_hermitian(&h, |lambda| Complex64::new(lambda.cos(), lambda.sin()));
    }
    pade_scaling_squaring(a)
}

fn exp_hermitian<F>(h: &CMat, f: F) -> Result<CMat, QuantumError>
where
    F: Fn(f64) -> Complex64,
{
    let n = h.nrows();
    // Symmetrize to strip rounding noise before the eigensolve.
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, 10_000).ok_or_else(|| {
        QuantumError::ExponentialFailed {
            detail: format!(
                "hermitian eigendecomposition did not converge (dim {n}, max entry {:.3e})",
                max_entry_norm(h)
            ),
        }
    })?;
    let v = eig.eigenvectors;
    let mut scaled = v.clone();
    for (j, lambda) in eig.eigenvalues.iter().enumerate() {
        let phase = f(*lambda);
        scaled.column_mut(j).iter_mut().for_each(|c| *c *= phase);
    }
    Ok(scaled * v.adjoint())
}

// Padé-13 coefficients (Higham, "The Scaling and Squaring Method for the
// Matrix Exponential Revisited").
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const PADE13_THETA: f64 = 5.371920351148152;

fn one_norm(m: &CMat) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|c| c.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn pade_scaling_squaring(a: &CMat) -> Result<CMat, QuantumError> {
    let n = a.nrows();
    let norm = one_norm(a);
    let squarings = if norm > PADE13_THETA {
        (norm / PADE13_THETA).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.scale((0.5f64).powi(squarings as i32));

    let id = CMat::identity(n, n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let b = &PADE13;
    let u_inner = &a6 * (a6.scale(b[13]) + a4.scale(b[11]) + a2.scale(b[9]))
        + a6.scale(b[7])
        + a4.scale(b[5])
        + a2.scale(b[3])
        + id.scale(b[1]);
    let u = &scaled * u_inner;
    let v = &a6 * (a6.scale(b[12]) + a4.scale(b[10]) + a2.scale(b[8]))
        + a6.scale(b[6])
        + a4.scale(b[4])
        + a2.scale(b[2])
        + id.scale(b[0]);

    let lhs = &v - &u;
    let rhs = &v + &u;
    let mut result = lhs
        .lu()
        .solve(&rhs)
        .ok_or_else(|| QuantumError::ExponentialFailed {
            detail: format!(
                "Padé denominator is singular (dim {n}, 1-norm {norm:.3e}, {squarings} squarings)"
            ),
        })?;
    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;
    use std::f64::consts::PI;

    #[test]
    fn exp_of_zero_is_identity() {
        let z = CMat::zeros(6, 6);
        let e = matrix_exponential(&z).unwrap();
        assert_eq!(max_entry_norm(&(e - CMat::identity(6, 6))), 0.0);
    }

    #[test]
    fn exp_of_diagonal_phases() {
        // exp(i*pi*diag(0,1,2,...)) = diag(1,-1,1,...)
        let n = 8;
        let d = CMat::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(0.0, PI * i as f64)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let e = matrix_exponential(&d).unwrap();
        for i in 0..n {
            let expected = if i % 2 == 0 { 1.0 } else { -1.0 };
            assert!((e[(i, i)] - C64::new(expected, 0.0)).norm() < 1e-13);
        }
    }

    /// Plain 50-term Taylor series; independent of the production paths.
    fn series_oracle(a: &CMat) -> CMat {
        let n = a.nrows();
        let mut sum = CMat::identity(n, n);
        let mut term = CMat::identity(n, n);
        for k in 1..=50 {
            term = (&term * a).scale(1.0 / k as f64);
            sum += &term;
        }
        sum
    }

    fn pseudo_random_anti_hermitian(n: usize, seed: u64) -> CMat {
        // xorshift; deterministic test data without a rand dependency
        let mut state = seed.max(1);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let raw = CMat::from_fn(n, n, |_, _| C64::new(next(), next()));
        (&raw - raw.adjoint()).scale(0.5)
    }

    #[test]
    fn anti_hermitian_path_matches_series_oracle() {
        for seed in [3u64, 17, 101] {
            let a = pseudo_random_anti_hermitian(8, seed);
            let e = matrix_exponential(&a).unwrap();
            let oracle = series_oracle(&a);
            let defect = max_entry_norm(&(&e - &oracle));
            assert!(defect <= 1e-11, "seed {seed}: defect {defect:.3e}");
            // and the result is unitary
            let u = max_entry_norm(&(e.adjoint() * &e - CMat::identity(8, 8)));
            assert!(u <= 1e-12);
        }
    }

    #[test]
    fn general_path_matches_series_oracle() {
        let mut a = pseudo_random_anti_hermitian(6, 7);
        // break the structure so the Padé path is exercised
        a[(0, 1)] += C64::new(0.7, 0.1);
        a[(4, 2)] -= C64::new(0.3, 0.2);
        let e = matrix_exponential(&a).unwrap();
        let oracle = series_oracle(&a);
        assert!(max_entry_norm(&(&e - &oracle)) <= 1e-12);
    }

    #[test]
    fn general_path_handles_large_norms_by_scaling() {
        let mut a = pseudo_random_anti_hermitian(5, 23).scale(40.0);
        a[(1, 3)] += C64::new(2.0, 0.0);
        let e = matrix_exponential(&a).unwrap();
        // exp(A)exp(-A) = 1 is a route-independent consistency check
        let e_neg = matrix_exponential(&(-&a)).unwrap();
        let defect = max_entry_norm(&(&e * &e_neg - CMat::identity(5, 5)));
        assert!(defect <= 1e-9, "defect {defect:.3e}");
    }

    #[test]
    fn non_finite_entries_are_rejected() {
        let mut a = CMat::zeros(3, 3);
        a[(1, 1)] = C64::new(f64::NAN, 0.0);
        assert!(matches!(
            matrix_exponential(&a),
            Err(QuantumError::NonFiniteEntries)
        ));
    }
}
