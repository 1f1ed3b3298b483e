//! Classical invariant evaluation: Wronskian drift, the quadratic constant
//! of motion I = ½ρ⁴ṡ_ρ², the auxiliary-equation residual, and the adiabatic
//! diagnostic ρ√Ω.

use super::integrate::Trajectory;
use super::phase::AmplitudePhaseSeries;
use super::profile::FrequencyProfile;
use super::ClassicalError;

/// Summary of the conserved quantities along one trajectory.
#[derive(Debug, Clone)]
pub struct InvariantReport {
    /// Wronskian at the initial sample.
    pub g0: f64,
    /// max |G(t)/G(t₀) − 1| over the samples.
    pub max_g_drift: f64,
    /// I(t) = ½ρ⁴ṡ_ρ² per sample.
    pub i_series: Vec<f64>,
    /// max |I(t)/I(t₀) − 1|.
    pub max_i_drift: f64,
    /// Worst pointwise |I − G²/2| / (G₀²/2), with G the sample Wronskian.
    pub max_identity_defect: f64,
}

/// Evaluate G and I along the trajectory and report their drifts.
pub fn classical_invariants(traj: &Trajectory) -> InvariantReport {
    let g0 = traj.g;
    let i0 = 0.5 * g0 * g0;
    let mut i_series = Vec::with_capacity(traj.points.len());
    let mut max_g_drift = 0.0f64;
    let mut max_i_drift = 0.0f64;
    let mut max_identity_defect = 0.0f64;
    for p in &traj.points {
        let gi = p.wronskian();
        let rho_sq = p.u1 * p.u1 + p.u2 * p.u2;
        let omega = gi / rho_sq;
        let inv = 0.5 * rho_sq * rho_sq * omega * omega;
        i_series.push(inv);
        max_g_drift = max_g_drift.max(((gi - g0) / g0).abs());
        max_i_drift = max_i_drift.max(((inv - i0) / i0).abs());
        max_identity_defect = max_identity_defect.max(((inv - 0.5 * gi * gi) / i0).abs());
    }
    InvariantReport {
        g0,
        max_g_drift,
        i_series,
        max_i_drift,
        max_identity_defect,
    }
}

/// Residual of the auxiliary equation ρ̈ + Ω²ρ − G²/ρ³ at interior samples.
#[derive(Debug, Clone)]
pub struct ResidualSeries {
    /// (t, residual) at samples where the five-point stencil fits.
    pub values: Vec<(f64, f64)>,
    pub max_abs: f64,
}

/// Evaluate the auxiliary-equation residual with ρ̈ from five-point
/// finite differences (fourth order on uniform grids).
pub fn ermakov_residual(
    series: &AmplitudePhaseSeries,
    profile: &FrequencyProfile,
    g: f64,
) -> Result<ResidualSeries, ClassicalError> {
    let n = series.records.len();
    if n < 5 {
        return Err(ClassicalError::InsufficientGrid { got: n, need: 5 });
    }
    let mut values = Vec::with_capacity(n - 4);
    let mut max_abs = 0.0f64;
    for i in 2..n - 2 {
        let window: Vec<(f64, f64)> = series.records[i - 2..=i + 2]
            .iter()
            .map(|r| (r.t, r.rho))
            .collect();
        let t0 = window[2].0;
        let xs: Vec<f64> = window.iter().map(|&(t, _)| t).collect();
        let w = fd_weights(t0, &xs, 2);
        let ddrho: f64 = w
            .iter()
            .zip(window.iter())
            .map(|(wi, &(_, rho))| wi * rho)
            .sum();
        let rho = window[2].1;
        let omega_sq = profile.eval(t0)?.omega_sq;
        let residual = ddrho + omega_sq * rho - g * g / (rho * rho * rho);
        max_abs = max_abs.max(residual.abs());
        values.push((t0, residual));
    }
    Ok(ResidualSeries { values, max_abs })
}

/// Supremum of |ρ√Ω − ρ₀√Ω₀| along the series. Purely diagnostic: large
/// values flag non-adiabatic evolution, they are not an error.
pub fn adiabatic_check(
    series: &AmplitudePhaseSeries,
    profile: &FrequencyProfile,
) -> Result<f64, ClassicalError> {
    let first = &series.records[0];
    let reference = first.rho * profile.eval(first.t)?.omega.sqrt();
    let mut max_dev = 0.0f64;
    for r in &series.records {
        let value = r.rho * profile.eval(r.t)?.omega.sqrt();
        max_dev = max_dev.max((value - reference).abs());
    }
    Ok(max_dev)
}

/// Finite-difference weights for the `m`-th derivative at `x0` from the
/// nodes `xs` (Fornberg's recursion).
pub fn fd_weights(x0: f64, xs: &[f64], m: usize) -> Vec<f64> {
    let n = xs.len();
    assert!(n > m, "need more nodes than the derivative order");
    let mut c = vec![vec![0.0f64; m + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::integrate::{integrate_tdho, uniform_grid, InitialConditions};
    use crate::classical::phase::amplitude_phase;
    use crate::classical::IntegratorSettings;

    #[test]
    fn fornberg_reproduces_the_uniform_five_point_stencil() {
        let h = 0.25;
        let xs: Vec<f64> = (-2..=2).map(|k| k as f64 * h).collect();
        let w = fd_weights(0.0, &xs, 2);
        let expected = [-1.0, 16.0, -30.0, 16.0, -1.0].map(|c| c / (12.0 * h * h));
        for (a, b) in w.iter().zip(expected.iter()) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn stationary_solution_has_vanishing_residual() {
        let profile = FrequencyProfile::constant(1.0, 0.0, 20.0).unwrap();
        // Second differences amplify solution noise by 1/h^2; give the
        // stationary case a cleaner trajectory than the defaults.
        let settings = IntegratorSettings {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            ..IntegratorSettings::default()
        };
        let traj = integrate_tdho(
            &profile,
            InitialConditions::DefaultUnit,
            settings,
            &uniform_grid(0.0, 20.0, 401),
        )
        .unwrap();
        let series = amplitude_phase(&traj).unwrap();
        let res = ermakov_residual(&series, &profile, traj.g).unwrap();
        assert!(res.max_abs <= 1e-10, "max residual {}", res.max_abs);
    }

    #[test]
    fn residual_needs_at_least_five_samples() {
        let profile = FrequencyProfile::constant(1.0, 0.0, 1.0).unwrap();
        let traj = integrate_tdho(
            &profile,
            InitialConditions::DefaultUnit,
            IntegratorSettings::default(),
            &uniform_grid(0.0, 1.0, 4),
        )
        .unwrap();
        let series = amplitude_phase(&traj).unwrap();
        assert!(matches!(
            ermakov_residual(&series, &profile, traj.g),
            Err(ClassicalError::InsufficientGrid { got: 4, need: 5 })
        ));
    }

    #[test]
    fn invariant_is_half_wronskian_squared() {
        let profile = FrequencyProfile::tanh_sweep(1.0, 2.0, 50.0, 20.0, 0.0, 100.0).unwrap();
        for (init, expected_i) in [
            (InitialConditions::DefaultUnit, 0.5),
            (
                // same pair with u2, du2 doubled: G = 2, I = 2
                InitialConditions::Explicit {
                    u1: 0.0,
                    du1: -1.0,
                    u2: 2.0,
                    du2: 0.0,
                },
                2.0,
            ),
        ] {
            let traj = integrate_tdho(
                &profile,
                init,
                IntegratorSettings::default(),
                &uniform_grid(0.0, 100.0, 1001),
            )
            .unwrap();
            let report = classical_invariants(&traj);
            for &i in &report.i_series {
                assert!(
                    (i / expected_i - 1.0).abs() <= 1e-8,
                    "I = {i}, expected {expected_i}"
                );
            }
            assert!(report.max_identity_defect <= 1e-12);
        }
    }

    #[test]
    fn rescaled_pair_satisfies_only_the_general_wronskian_form() {
        // G = 2 pair launched away from its equilibrium amplitude: rho
        // breathes strongly, so the stencil needs a fine grid. The
        // G^2/rho^3 form holds while the unit-Wronskian form misses by O(1).
        let profile = FrequencyProfile::tanh_sweep(1.0, 2.0, 10.0, 10.0, 0.0, 20.0).unwrap();
        let traj = integrate_tdho(
            &profile,
            InitialConditions::Explicit {
                u1: 0.0,
                du1: -1.0,
                u2: 2.0,
                du2: 0.0,
            },
            IntegratorSettings::default(),
            &uniform_grid(0.0, 20.0, 8001),
        )
        .unwrap();
        assert_eq!(traj.g, 2.0);
        let series = amplitude_phase(&traj).unwrap();
        let general = ermakov_residual(&series, &profile, traj.g).unwrap();
        assert!(
            general.max_abs <= 1e-5,
            "G^2 form residual {}",
            general.max_abs
        );
        let unit_form = ermakov_residual(&series, &profile, 1.0).unwrap();
        assert!(
            unit_form.max_abs > 0.1,
            "unit-Wronskian form should fail by O(1), got {}",
            unit_form.max_abs
        );
    }

    #[test]
    fn adiabatic_deviation_vanishes_for_constant_frequency() {
        let profile = FrequencyProfile::constant(1.3, 0.0, 10.0).unwrap();
        let traj = integrate_tdho(
            &profile,
            InitialConditions::DefaultUnit,
            IntegratorSettings::default(),
            &uniform_grid(0.0, 10.0, 201),
        )
        .unwrap();
        let series = amplitude_phase(&traj).unwrap();
        let dev = adiabatic_check(&series, &profile).unwrap();
        assert!(dev <= 1e-9, "deviation {dev}");
    }

    #[test]
    fn fast_sweep_reports_large_deviation_without_failing() {
        let profile = FrequencyProfile::tanh_sweep(1.0, 2.0, 5.0, 0.1, 0.0, 10.0).unwrap();
        let traj = integrate_tdho(
            &profile,
            InitialConditions::DefaultUnit,
            IntegratorSettings::default(),
            &uniform_grid(0.0, 10.0, 2001),
        )
        .unwrap();
        let series = amplitude_phase(&traj).unwrap();
        let dev = adiabatic_check(&series, &profile).unwrap();
        assert!(
            dev > 0.05,
            "fast sweep should break adiabaticity, got {dev}"
        );
    }

    #[test]
    fn slow_sweep_is_adiabatic() {
        let profile = FrequencyProfile::tanh_sweep(1.0, 2.0, 200.0, 200.0, 0.0, 400.0).unwrap();
        let traj = integrate_tdho(
            &profile,
            InitialConditions::DefaultUnit,
            IntegratorSettings::default(),
            &uniform_grid(0.0, 400.0, 8001),
        )
        .unwrap();
        let series = amplitude_phase(&traj).unwrap();
        let dev = adiabatic_check(&series, &profile).unwrap();
        assert!(dev <= 1e-2, "deviation {dev}");
    }
}
