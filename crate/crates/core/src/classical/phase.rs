//! Amplitude-phase representation of an integrated solution pair.
//!
//! The substitution u₁ = −ρ sin s_ρ, u₂ = ρ cos s_ρ gives ρ = √(u₁² + u₂²)
//! and ṡ_ρ = G/ρ². The unwrapped phase is obtained by quadrature of that
//! exact rate equation (branch-cut free); the four-quadrant arctangent is
//! computed alongside purely as a cross-check and its worst disagreement is
//! recorded on the series.

use super::integrate::Trajectory;
use super::ClassicalError;

/// One record of the amplitude-phase series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseRecord {
    pub t: f64,
    /// Amplitude ρ > 0.
    pub rho: f64,
    /// dρ/dt = (u₁u̇₁ + u₂u̇₂)/ρ.
    pub drho: f64,
    /// Unwrapped phase from quadrature of ṡ_ρ = G/ρ².
    pub s_rho: f64,
    /// Local frequency ω ≡ ṡ_ρ = G/ρ², evaluated with the sample's own
    /// Wronskian so that integration drift is visible rather than hidden.
    pub omega: f64,
}

/// ρ(t), ρ̇(t), s_ρ(t) and ω(t) sampled along a trajectory.
#[derive(Debug, Clone)]
pub struct AmplitudePhaseSeries {
    pub records: Vec<PhaseRecord>,
    /// Trajectory-level Wronskian constant.
    pub g: f64,
    pub rho0: f64,
    pub omega0: f64,
    /// Worst |s_ρ − atan2(−u₁, u₂)| over all samples, wrapped to (−π, π].
    pub phase_defect_max: f64,
}

impl AmplitudePhaseSeries {
    /// Largest relative defect of ρ²ω against its initial value ρ₀²ω₀.
    pub fn max_rho_sq_omega_defect(&self) -> f64 {
        let reference = self.rho0 * self.rho0 * self.omega0;
        self.records
            .iter()
            .map(|r| ((r.rho * r.rho * r.omega - reference) / reference).abs())
            .fold(0.0, f64::max)
    }

    pub fn record_at(&self, t: f64) -> Option<&PhaseRecord> {
        self.records
            .binary_search_by(|r| r.t.partial_cmp(&t).expect("finite times"))
            .ok()
            .map(|i| &self.records[i])
    }
}

fn wrap_to_pi(x: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let mut r = x % two_pi;
    if r > std::f64::consts::PI {
        r -= two_pi;
    } else if r <= -std::f64::consts::PI {
        r += two_pi;
    }
    r
}

/// Build the amplitude-phase series for a trajectory.
pub fn amplitude_phase(traj: &Trajectory) -> Result<AmplitudePhaseSeries, ClassicalError> {
    let g = traj.g;
    if g == 0.0 {
        return Err(ClassicalError::DegeneratePair { wronskian: g });
    }

    let n = traj.points.len();
    let mut records = Vec::with_capacity(n);

    // Pointwise rate f = ṡ_ρ and its first and third time derivatives, used
    // for the Euler-Maclaurin end corrections of the segment quadrature.
    // ρ̈ and ρ⃛ follow from the auxiliary equation ρ̈ = G²/ρ³ − Ω²ρ.
    let mut rate = Vec::with_capacity(n);
    let mut rate_d1 = Vec::with_capacity(n);
    let mut rate_d3 = Vec::with_capacity(n);
    for p in &traj.points {
        let rho = p.rho();
        let drho = (p.u1 * p.du1 + p.u2 * p.du2) / rho;
        let gi = p.wronskian();
        let omega = gi / (rho * rho);
        let prof = traj.profile.eval(p.t)?;
        let ddrho = gi * gi / (rho * rho * rho) - prof.omega_sq * rho;
        let dddrho = -3.0 * gi * gi * drho / rho.powi(4)
            - 2.0 * prof.omega * prof.d_omega * rho
            - prof.omega_sq * drho;
        let w1 = -2.0 * drho / rho.powi(3);
        let w2 = 6.0 * drho * drho / rho.powi(4) - 2.0 * ddrho / rho.powi(3);
        let w3 = -24.0 * drho.powi(3) / rho.powi(5) + 18.0 * drho * ddrho / rho.powi(4)
            - 2.0 * dddrho / rho.powi(3);
        let _ = w2; // second derivative drops out of the end corrections
        rate.push(omega);
        rate_d1.push(gi * w1);
        rate_d3.push(gi * w3);
        records.push(PhaseRecord {
            t: p.t,
            rho,
            drho,
            s_rho: 0.0,
            omega,
        });
    }

    // Anchor the phase to the principal arctangent at the first sample and
    // accumulate segment integrals of ṡ_ρ with 6th-order end corrections.
    let p0 = &traj.points[0];
    let mut s = f64::atan2(-p0.u1, p0.u2);
    records[0].s_rho = s;
    let mut defect_max = 0.0f64;
    for i in 1..n {
        let h = records[i].t - records[i - 1].t;
        let trapezoid = 0.5 * h * (rate[i - 1] + rate[i]);
        let c1 = -h * h / 12.0 * (rate_d1[i] - rate_d1[i - 1]);
        let c3 = h.powi(4) / 720.0 * (rate_d3[i] - rate_d3[i - 1]);
        s += trapezoid + c1 + c3;
        records[i].s_rho = s;
        let p = &traj.points[i];
        let theta = f64::atan2(-p.u1, p.u2);
        defect_max = defect_max.max(wrap_to_pi(s - theta).abs());
    }

    let rho0 = records[0].rho;
    let omega0 = records[0].omega;
    Ok(AmplitudePhaseSeries {
        records,
        g,
        rho0,
        omega0,
        phase_defect_max: defect_max,
    })
}
