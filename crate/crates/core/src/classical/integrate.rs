//! Adaptive integration of ü + Ω²(t)u = 0 for a pair of solutions.
//!
//! Both solutions are carried in one state vector (u₁, u̇₁, u₂, u̇₂) so they
//! see identical step sequences; the Wronskian drift of the pair is then a
//! direct measure of integration error. The stepper is the Dormand–Prince
//! 5(4) embedded pair with FSAL and a standard step-size controller. Output
//! samples are hit exactly by clamping the step, never by interpolation.

use serde::Serialize;

use super::profile::FrequencyProfile;
use super::ClassicalError;

/// One sampled state of the solution pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub u1: f64,
    pub du1: f64,
    pub u2: f64,
    pub du2: f64,
}

impl TrajectoryPoint {
    /// u₁u̇₂ − u₂u̇₁ at this sample.
    pub fn wronskian(&self) -> f64 {
        self.u1 * self.du2 - self.u2 * self.du1
    }

    /// Amplitude ρ = √(u₁² + u₂²).
    pub fn rho(&self) -> f64 {
        self.u1.hypot(self.u2)
    }
}

/// Initial data for the solution pair at `t_min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum InitialConditions {
    /// u₁ = 0, u̇₁ = −√ω₀, u₂ = 1/√ω₀, u̇₂ = 0, giving G = 1 and ρ₀ = 1/√ω₀.
    DefaultUnit,
    /// Explicit values (u₁, u̇₁, u₂, u̇₂).
    Explicit {
        u1: f64,
        du1: f64,
        u2: f64,
        du2: f64,
    },
}

impl InitialConditions {
    pub fn state(&self, omega0: f64) -> [f64; 4] {
        match *self {
            InitialConditions::DefaultUnit => {
                let s = omega0.sqrt();
                [0.0, -s, 1.0 / s, 0.0]
            }
            InitialConditions::Explicit { u1, du1, u2, du2 } => [u1, du1, u2, du2],
        }
    }
}

/// Integrator controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegratorSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_steps: 50_000_000,
        }
    }
}

/// Counters and extrema recorded during a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct StepStatistics {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
    pub min_step: f64,
    pub max_step: f64,
}

/// Sampled solution pair with its conserved Wronskian.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub profile: FrequencyProfile,
    pub points: Vec<TrajectoryPoint>,
    /// Wronskian of the pair at the first sample.
    pub g: f64,
    pub settings: IntegratorSettings,
    pub stats: StepStatistics,
}

impl Trajectory {
    pub fn initial_time(&self) -> f64 {
        self.points[0].t
    }

    /// Wronskian at sample index `i`.
    pub fn wronskian_at(&self, i: usize) -> f64 {
        self.points[i].wronskian()
    }

    /// Wronskian at a sample time; `None` if `t` is not a sample point.
    pub fn wronskian(&self, t: f64) -> Option<f64> {
        self.index_of(t).map(|i| self.wronskian_at(i))
    }

    pub fn index_of(&self, t: f64) -> Option<usize> {
        self.points
            .binary_search_by(|p| p.t.partial_cmp(&t).expect("sample times are finite"))
            .ok()
    }

    /// Largest relative Wronskian drift over all samples.
    pub fn max_wronskian_drift(&self) -> f64 {
        let g0 = self.g;
        self.points
            .iter()
            .map(|p| ((p.wronskian() - g0) / g0).abs())
            .fold(0.0, f64::max)
    }
}

const RK_STAGES: usize = 7;

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
// b (5th order) minus b* (4th order): error estimator weights.
const E: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];

fn rhs(profile: &FrequencyProfile, t: f64, y: &[f64; 4]) -> [f64; 4] {
    // Domain membership is guaranteed by the caller; clamp guards the
    // last few ulp at the domain edges.
    let t = t.clamp(profile.t_min, profile.t_max);
    let omega_sq = profile
        .eval(t)
        .expect("integration stays inside the profile domain")
        .omega_sq;
    [y[1], -omega_sq * y[0], y[3], -omega_sq * y[2]]
}

/// Integrate the pair over `sample_times` (strictly increasing, first entry
/// is the initial time) and record the state at every requested time.
pub fn integrate_tdho(
    profile: &FrequencyProfile,
    init: InitialConditions,
    settings: IntegratorSettings,
    sample_times: &[f64],
) -> Result<Trajectory, ClassicalError> {
    if sample_times.len() < 2 {
        return Err(ClassicalError::InsufficientGrid {
            got: sample_times.len(),
            need: 2,
        });
    }
    for w in sample_times.windows(2) {
        if w[0].is_nan() || w[1].is_nan() || w[1] <= w[0] {
            return Err(ClassicalError::NonMonotoneGrid { t: w[1] });
        }
    }
    if !profile.contains(sample_times[0]) || !profile.contains(*sample_times.last().unwrap()) {
        return Err(ClassicalError::OutOfDomain {
            t: *sample_times.last().unwrap(),
            t_min: profile.t_min,
            t_max: profile.t_max,
        });
    }

    let t0 = sample_times[0];
    let omega0 = profile.eval(t0)?.omega;
    let mut y = init.state(omega0);
    let g0 = y[0] * y[3] - y[2] * y[1];
    let scale = y[0].abs() * y[3].abs() + y[2].abs() * y[1].abs();
    if g0.abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(ClassicalError::DegeneratePair { wronskian: g0 });
    }

    let mut points = Vec::with_capacity(sample_times.len());
    points.push(TrajectoryPoint {
        t: t0,
        u1: y[0],
        du1: y[1],
        u2: y[2],
        du2: y[3],
    });

    let mut stats = StepStatistics {
        min_step: f64::INFINITY,
        ..StepStatistics::default()
    };

    let mut t = t0;
    let mut k1 = rhs(profile, t, &y);
    stats.rhs_evals += 1;

    // Conservative initial step: a small fraction of the local period.
    let mut h = (0.01 / omega0).min(sample_times[1] - t0);
    let mut next_sample = 1;

    while next_sample < sample_times.len() {
        if stats.accepted + stats.rejected >= settings.max_steps {
            return Err(ClassicalError::IntegrationFailure {
                t,
                step: h,
                detail: format!("step budget of {} exhausted", settings.max_steps),
            });
        }

        let target = sample_times[next_sample];
        let mut hitting_sample = false;
        if t + h >= target - 1e-14 * target.abs().max(1.0) {
            h = target - t;
            hitting_sample = true;
        }
        if h <= f64::EPSILON * 16.0 * t.abs().max(1.0) {
            return Err(ClassicalError::IntegrationFailure {
                t,
                step: h,
                detail: "step size underflow".to_string(),
            });
        }

        // Stage evaluations (k1 is FSAL from the previous accepted step).
        let mut k = [[0.0f64; 4]; RK_STAGES];
        k[0] = k1;
        for s in 0..6 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s + 1) {
                let a = A[s][j];
                if a != 0.0 {
                    for d in 0..4 {
                        ys[d] += h * a * kj[d];
                    }
                }
            }
            k[s + 1] = rhs(profile, t + C[s] * h, &ys);
        }
        stats.rhs_evals += 6;

        // 5th-order solution is the stage-7 state (b row equals A[5]).
        let mut y_new = y;
        for (j, kj) in k.iter().enumerate().take(6) {
            let a = A[5][j];
            if a != 0.0 {
                for d in 0..4 {
                    y_new[d] += h * a * kj[d];
                }
            }
        }

        // Scaled RMS error estimate.
        let mut err_sq = 0.0;
        for d in 0..4 {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                e += E[j] * kj[d];
            }
            e *= h;
            let tol = settings.abs_tol + settings.rel_tol * y[d].abs().max(y_new[d].abs());
            err_sq += (e / tol) * (e / tol);
        }
        let err = (err_sq / 4.0).sqrt();

        if err <= 1.0 {
            stats.accepted += 1;
            stats.min_step = stats.min_step.min(h);
            stats.max_step = stats.max_step.max(h);
            t = if hitting_sample { target } else { t + h };
            y = y_new;
            k1 = k[6];
            if hitting_sample {
                points.push(TrajectoryPoint {
                    t,
                    u1: y[0],
                    du1: y[1],
                    u2: y[2],
                    du2: y[3],
                });
                next_sample += 1;
            }
        } else {
            stats.rejected += 1;
        }

        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
    }

    Ok(Trajectory {
        profile: *profile,
        points,
        g: g0,
        settings,
        stats,
    })
}

/// Uniform grid of `n` sample times spanning `[t_min, t_max]`.
pub fn uniform_grid(t_min: f64, t_max: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "a grid needs at least two points");
    let dt = (t_max - t_min) / (n - 1) as f64;
    (0..n)
        .map(|i| {
            if i == n - 1 {
                t_max
            } else {
                t_min + dt * i as f64
            }
        })
        .collect()
}
