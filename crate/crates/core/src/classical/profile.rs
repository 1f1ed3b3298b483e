//! Time-dependent frequency profiles Ω(t) for the oscillator Hamiltonian.
//!
//! Every profile is strictly positive and continuous on its domain. The tanh
//! sweep and the smoothed step are C¹ with analytically evaluated dΩ/dt, so
//! downstream checks never have to differentiate the profile numerically.

use serde::{Deserialize, Serialize};

use super::ClassicalError;

/// Parametric family of frequency profiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    /// Ω(t) = ω_start everywhere.
    Constant,
    /// Linear ramp from ω_start to ω_end over the window
    /// `[center - duration/2, center + duration/2]`, clamped outside.
    LinearRamp,
    /// Ω(t) = ω_start + (ω_end − ω_start)·(1 + tanh(4(t − center)/duration))/2.
    ///
    /// The ramp is ~96% complete within one `duration` window centered on
    /// `center` and approaches the endpoints exponentially outside it.
    TanhSweep,
    /// A step from ω_start to ω_end at `center`, smoothed by a cubic
    /// smoothstep over `[center - duration/2, center + duration/2]`.
    /// Exactly constant outside the window, C¹ everywhere.
    PiecewiseConstantSmoothed,
}

/// Ω(t) together with its domain of validity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyProfile {
    pub kind: ProfileKind,
    pub omega_start: f64,
    pub omega_end: f64,
    /// Center time of the transition (ignored by `Constant`).
    pub center: f64,
    /// Transition duration (ignored by `Constant`).
    pub duration: f64,
    pub t_min: f64,
    pub t_max: f64,
}

/// Analytic evaluation of a profile at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub omega: f64,
    pub omega_sq: f64,
    pub d_omega: f64,
}

impl FrequencyProfile {
    /// Constant profile Ω ≡ ω on `[t_min, t_max]`.
    pub fn constant(omega: f64, t_min: f64, t_max: f64) -> Result<Self, ClassicalError> {
        Self::new(ProfileKind::Constant, omega, omega, 0.0, 1.0, t_min, t_max)
    }

    /// Tanh sweep from `omega_start` to `omega_end`.
    pub fn tanh_sweep(
        omega_start: f64,
        omega_end: f64,
        center: f64,
        duration: f64,
        t_min: f64,
        t_max: f64,
    ) -> Result<Self, ClassicalError> {
        Self::new(
            ProfileKind::TanhSweep,
            omega_start,
            omega_end,
            center,
            duration,
            t_min,
            t_max,
        )
    }

    /// Validated constructor shared by all kinds.
    pub fn new(
        kind: ProfileKind,
        omega_start: f64,
        omega_end: f64,
        center: f64,
        duration: f64,
        t_min: f64,
        t_max: f64,
    ) -> Result<Self, ClassicalError> {
        if omega_start <= 0.0 || !omega_start.is_finite() {
            return Err(ClassicalError::InvalidProfile {
                field: "omega_start",
                value: omega_start,
            });
        }
        if omega_end <= 0.0 || !omega_end.is_finite() {
            return Err(ClassicalError::InvalidProfile {
                field: "omega_end",
                value: omega_end,
            });
        }
        if kind != ProfileKind::Constant && (duration.is_nan() || duration <= 0.0) {
            return Err(ClassicalError::InvalidProfile {
                field: "duration",
                value: duration,
            });
        }
        if t_min.is_nan() || t_max.is_nan() || t_min >= t_max {
            return Err(ClassicalError::InvalidProfile {
                field: "t_max",
                value: t_max,
            });
        }
        Ok(Self {
            kind,
            omega_start,
            omega_end,
            center,
            duration,
            t_min,
            t_max,
        })
    }

    pub fn contains(&self, t: f64) -> bool {
        // Tolerate a few ulp of grid rounding at the endpoints.
        let slack = 1e-12 * (1.0 + self.t_max.abs().max(self.t_min.abs()));
        t >= self.t_min - slack && t <= self.t_max + slack
    }

    /// Ω at the left edge of the domain; this is the reference frequency ω₀
    /// used by the default initial conditions and the Fock-space basis.
    pub fn omega_initial(&self) -> f64 {
        self.eval_unchecked(self.t_min).omega
    }

    /// Evaluate (Ω, Ω², dΩ/dt) at `t`, failing outside the domain.
    pub fn eval(&self, t: f64) -> Result<ProfileSample, ClassicalError> {
        if !self.contains(t) {
            return Err(ClassicalError::OutOfDomain {
                t,
                t_min: self.t_min,
                t_max: self.t_max,
            });
        }
        Ok(self.eval_unchecked(t))
    }

    fn eval_unchecked(&self, t: f64) -> ProfileSample {
        let (omega, d_omega) = match self.kind {
            ProfileKind::Constant => (self.omega_start, 0.0),
            ProfileKind::LinearRamp => {
                let half = 0.5 * self.duration;
                let lo = self.center - half;
                let hi = self.center + half;
                if t <= lo {
                    (self.omega_start, 0.0)
                } else if t >= hi {
                    (self.omega_end, 0.0)
                } else {
                    let slope = (self.omega_end - self.omega_start) / self.duration;
                    (self.omega_start + slope * (t - lo), slope)
                }
            }
            ProfileKind::TanhSweep => {
                let x = 4.0 * (t - self.center) / self.duration;
                let th = x.tanh();
                let sech_sq = 1.0 - th * th;
                let delta = self.omega_end - self.omega_start;
                (
                    self.omega_start + 0.5 * delta * (1.0 + th),
                    0.5 * delta * sech_sq * 4.0 / self.duration,
                )
            }
            ProfileKind::PiecewiseConstantSmoothed => {
                let half = 0.5 * self.duration;
                let lo = self.center - half;
                let hi = self.center + half;
                if t <= lo {
                    (self.omega_start, 0.0)
                } else if t >= hi {
                    (self.omega_end, 0.0)
                } else {
                    let x = (t - lo) / self.duration;
                    let s = x * x * (3.0 - 2.0 * x);
                    let ds = 6.0 * x * (1.0 - x) / self.duration;
                    let delta = self.omega_end - self.omega_start;
                    (self.omega_start + delta * s, delta * ds)
                }
            }
        };
        ProfileSample {
            omega,
            omega_sq: omega * omega,
            d_omega,
        }
    }
}
