//! Cross-checks the adaptive integrator against an independent fixed-step
//! oracle: classic RK4 at step h and h/2, Richardson-extrapolated to
//! eliminate the leading error term. The oracle shares no code with the
//! production stepper.

use tdho_core::classical::{
    integrate_tdho, uniform_grid, FrequencyProfile, InitialConditions, IntegratorSettings,
};

/// Plain RK4 for the four-component pair state at a fixed step.
fn rk4_final_state(
    profile: &FrequencyProfile,
    y0: [f64; 4],
    t0: f64,
    t1: f64,
    steps: usize,
) -> [f64; 4] {
    let rhs = |t: f64, y: &[f64; 4]| -> [f64; 4] {
        let w2 = profile
            .eval(t.clamp(profile.t_min, profile.t_max))
            .unwrap()
            .omega_sq;
        [y[1], -w2 * y[0], y[3], -w2 * y[2]]
    };
    let h = (t1 - t0) / steps as f64;
    let mut y = y0;
    let mut t = t0;
    for _ in 0..steps {
        let k1 = rhs(t, &y);
        let mid1: [f64; 4] = std::array::from_fn(|i| y[i] + 0.5 * h * k1[i]);
        let k2 = rhs(t + 0.5 * h, &mid1);
        let mid2: [f64; 4] = std::array::from_fn(|i| y[i] + 0.5 * h * k2[i]);
        let k3 = rhs(t + 0.5 * h, &mid2);
        let end: [f64; 4] = std::array::from_fn(|i| y[i] + h * k3[i]);
        let k4 = rhs(t + h, &end);
        for i in 0..4 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t += h;
    }
    y
}

/// Richardson extrapolation of the fourth-order oracle: (16 y_{h/2} − y_h)/15.
fn oracle_final_state(
    profile: &FrequencyProfile,
    y0: [f64; 4],
    t0: f64,
    t1: f64,
    steps: usize,
) -> [f64; 4] {
    let coarse = rk4_final_state(profile, y0, t0, t1, steps);
    let fine = rk4_final_state(profile, y0, t0, t1, steps * 2);
    std::array::from_fn(|i| (16.0 * fine[i] - coarse[i]) / 15.0)
}

#[test]
fn adaptive_integrator_matches_the_richardson_oracle_on_a_sweep() {
    let profile = FrequencyProfile::tanh_sweep(1.0, 2.0, 50.0, 50.0, 0.0, 100.0).unwrap();
    let y0 = InitialConditions::DefaultUnit.state(profile.omega_initial());
    let oracle = oracle_final_state(&profile, y0, 0.0, 100.0, 100_000);

    let traj = integrate_tdho(
        &profile,
        InitialConditions::DefaultUnit,
        IntegratorSettings::default(),
        &uniform_grid(0.0, 100.0, 2001),
    )
    .unwrap();
    let last = traj.points.last().unwrap();
    let adaptive = [last.u1, last.du1, last.u2, last.du2];
    for (i, (a, o)) in adaptive.iter().zip(oracle.iter()).enumerate() {
        assert!(
            (a - o).abs() <= 1e-7,
            "component {i}: adaptive {a} vs oracle {o}"
        );
    }
}

#[test]
fn oracle_is_self_consistent_under_step_halving() {
    // the extrapolated value moves by far less than the tolerance it backs
    let profile = FrequencyProfile::tanh_sweep(1.0, 2.0, 50.0, 50.0, 0.0, 100.0).unwrap();
    let y0 = InitialConditions::DefaultUnit.state(profile.omega_initial());
    let a = oracle_final_state(&profile, y0, 0.0, 100.0, 50_000);
    let b = oracle_final_state(&profile, y0, 0.0, 100.0, 100_000);
    for i in 0..4 {
        assert!((a[i] - b[i]).abs() <= 1e-9, "component {i} unstable");
    }
}
