//! Numerical integration of the three-level equations over a pulse train.

use serde::Serialize;

use crate::ode::{self, Options};

use super::{BlochError, BlochState, PulseParams};

/// States sampled at t = 0, T, 2T, …, nT.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlochTrajectory {
    pub samples: Vec<BlochState>,
    /// Largest |Π_S + Π_P + Π_ion − 1| seen at any accepted step.
    pub max_norm_defect: f64,
    /// Smallest population seen at any accepted step.
    pub min_population: f64,
    pub accepted_steps: usize,
}

impl BlochTrajectory {
    pub fn last(&self) -> &BlochState {
        self.samples.last().expect("trajectory always holds the initial state")
    }

    /// Ionized population after the first period.
    pub fn first_period_ionization(&self) -> f64 {
        self.samples[1].pi_ion
    }
}

/// Integrates the pulse train starting in the ground state.
///
/// While the pulse is on (0 ≤ t < τ):
///
/// ```text
/// dΠ_S/dt   = −gC + γΠ_P
/// dΠ_P/dt   =  gC − (Γ + Γ_cw + γ)Π_P
/// dΠ_ion/dt = (Γ + Γ_cw)Π_P
/// dC/dt     = −(g/2)(Π_P − Π_S) − (Γ/2)C
/// ```
///
/// is stepped with an adaptive Dormand–Prince scheme that stops exactly at
/// t = τ. For τ ≤ t < T the pulse is off (g = Γ = 0), the system is linear
/// and is advanced analytically: Π_P decays at γ + Γ_cw, a fraction
/// Γ_cw/(γ + Γ_cw) of it ionizes, the rest returns to S, and the coherence
/// decays at (γ + Γ_cw)/2.
///
/// `tol` is the relative tolerance of the in-pulse integration and must lie
/// in (0, 1e-6].
pub fn integrate_bloch(params: &PulseParams, n_pulses: usize, tol: f64) -> Result<BlochTrajectory, BlochError> {
    if n_pulses == 0 {
        return Err(BlochError::InvalidArgument("n_pulses must be >= 1".into()));
    }
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(BlochError::InvalidArgument(format!(
            "tolerance {tol:e} outside (0, 1e-6]"
        )));
    }

    // Time in units of τ during the pulse.
    let theta = params.theta;
    let two_x = 2.0 * params.x;
    let gamma_tau = params.gamma * params.tau;
    let cw_tau = params.ion_rate_cw * params.tau;
    let rhs = move |_: f64, y: &[f64; 4]| {
        let [s, p, _, c] = *y;
        [
            -theta * c + gamma_tau * p,
            theta * c - (two_x + cw_tau + gamma_tau) * p,
            (two_x + cw_tau) * p,
            -0.5 * theta * (p - s) - 0.5 * two_x * c,
        ]
    };
    let opts = Options {
        rtol: tol,
        atol: tol * 1e-3,
        h_init: Some(0.01),
        max_steps: 1_000_000,
    };

    let gap = params.period - params.tau;
    let relax = params.gamma + params.ion_rate_cw;
    let p_left = (-relax * gap).exp();
    let transferred = -(-relax * gap).exp_m1();
    let c_left = (-0.5 * relax * gap).exp();
    let to_ion = params.ion_rate_cw / relax;
    let to_ground = params.gamma / relax;

    let mut samples = Vec::with_capacity(n_pulses + 1);
    let mut state = BlochState::ground();
    samples.push(state);
    let mut max_norm_defect: f64 = 0.0;
    let mut min_population: f64 = 0.0;
    let mut accepted_steps = 0;

    for _ in 0..n_pulses {
        let (end, stats) = ode::integrate(rhs, 0.0, state.to_array(), 1.0, &opts, |_, y| {
            max_norm_defect = max_norm_defect.max((y[0] + y[1] + y[2] - 1.0).abs());
            min_population = min_population.min(y[0].min(y[1]).min(y[2]));
        })?;
        accepted_steps += stats.accepted;

        let [s, p, ion, c] = end;
        let moved = p * transferred;
        state = BlochState {
            pi_s: s + to_ground * moved,
            pi_p: p * p_left,
            pi_ion: ion + to_ion * moved,
            c: c * c_left,
        };
        max_norm_defect = max_norm_defect.max((state.total() - 1.0).abs());
        samples.push(state);
    }

    Ok(BlochTrajectory {
        samples,
        max_norm_defect,
        min_population,
        accepted_steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{p_ion_closed, p_ion_simplified};
    use std::f64::consts::PI;

    const GAMMA: f64 = 2.0 * PI * 91e6;

    #[test]
    fn no_coupling_stays_in_ground() {
        let p = PulseParams::new(0.0, 0.0, 0.0, GAMMA, 1e-12, 12.5e-9).unwrap();
        let traj = integrate_bloch(&p, 5, 1e-10).unwrap();
        for s in &traj.samples {
            assert_eq!(*s, BlochState::ground());
        }
    }

    #[test]
    fn pi_pulse_without_ionization_returns_to_ground() {
        // γT ≈ 114: the excited state has fully decayed by the next pulse.
        let p = PulseParams::new(PI, 0.0, 0.0, GAMMA, 1e-12, 200e-9).unwrap();
        let traj = integrate_bloch(&p, 1, 1e-10).unwrap();
        let s = traj.samples[1];
        assert!((s.pi_s - 1.0).abs() < 1e-9, "{s:?}");
        assert_eq!(s.pi_ion, 0.0);
    }

    #[test]
    fn matches_closed_form_in_short_pulse_limit() {
        // γτ = 1e-8 so the neglected in-pulse decay is far below 1e-6.
        let tau = 1e-8 / GAMMA;
        let p = PulseParams::new(PI, 0.01, 0.0, GAMMA, tau, 12.5e-9).unwrap();
        let ion = integrate_bloch(&p, 1, 1e-12).unwrap().first_period_ionization();
        let closed = p_ion_closed(&p);
        assert!(((ion - closed) / closed).abs() < 1e-6, "{ion} {closed}");
        assert!((ion - 0.00993).abs() < 1e-5);
        // The simplified form drops an O((x/θ)²) term.
        let simple = p_ion_simplified(&p);
        assert!((ion - simple).abs() < 2.0 * (0.01 / PI).powi(2));
    }

    #[test]
    fn closed_form_within_1e3_for_picosecond_pulse() {
        let p = PulseParams::new(PI, 0.01, 0.0, GAMMA, 1e-12, 12.5e-9).unwrap();
        let ion = integrate_bloch(&p, 1, 1e-10).unwrap().first_period_ionization();
        let closed = p_ion_closed(&p);
        assert!(((ion - closed) / closed).abs() < 1e-3);
    }

    #[test]
    fn population_is_conserved_over_many_pulses() {
        let p = PulseParams::new(2.0, 0.05, 0.05, GAMMA, 1e-12, 200e-9).unwrap();
        let traj = integrate_bloch(&p, 50, 1e-10).unwrap();
        assert_eq!(traj.samples.len(), 51);
        assert!(traj.max_norm_defect < 1e-9, "{}", traj.max_norm_defect);
        assert!(traj.min_population > -1e-9);
        for s in &traj.samples {
            assert!(s.c.abs() <= 0.5 + 1e-12);
        }
        // Each period starts from the ground state, so survival is geometric.
        let per = traj.samples[1].pi_ion;
        let expected = 1.0 - (1.0 - per).powi(50);
        assert!((traj.last().pi_ion - expected).abs() / expected < 1e-3);
    }

    #[test]
    fn rejects_bad_arguments() {
        let p = PulseParams::new(1.0, 0.01, 0.0, GAMMA, 1e-12, 12.5e-9).unwrap();
        assert!(integrate_bloch(&p, 0, 1e-10).is_err());
        assert!(integrate_bloch(&p, 1, 1e-3).is_err());
        assert!(integrate_bloch(&p, 1, 0.0).is_err());
    }
}
