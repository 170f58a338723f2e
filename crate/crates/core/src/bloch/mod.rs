//! Three-level pulse-train dynamics: ground S, intermediate P and ionized.
//!
//! A square pulse of duration τ drives the S–P transition with Rabi
//! frequency g and ionizes from P at rate Γ; an optional cw laser ionizes
//! from P at rate Γ_cw at all times. Between pulses P decays radiatively at γ.

use serde::Serialize;
use thiserror::Error;

use crate::ode::OdeError;
use crate::physkit::{
    ionization_rate, peak_intensity, rabi_frequency, BeamGeometry, CwLaser, ParamError, PulsedLaser, Species,
};
use crate::warning::Warning;

mod closed;
mod dynamics;
mod spectrum;

pub use closed::{
    cw_only_probability, matched_cw_ratio, p_ion_closed, p_ion_focus, p_ion_simplified, p_ion_weak,
    pulsed_only_probability, CwRatio, FocusProbability, WeakLimit,
};
pub use dynamics::{integrate_bloch, BlochTrajectory};
pub use spectrum::{spectral_fwhm, spectral_weight};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BlochError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("Bloch integration failed: {0}")]
    Integration(#[from] OdeError),
}

/// Populations and S–P coherence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochState {
    pub pi_s: f64,
    pub pi_p: f64,
    pub pi_ion: f64,
    pub c: f64,
}

impl BlochState {
    pub fn ground() -> Self {
        BlochState {
            pi_s: 1.0,
            pi_p: 0.0,
            pi_ion: 0.0,
            c: 0.0,
        }
    }

    pub fn total(&self) -> f64 {
        self.pi_s + self.pi_p + self.pi_ion
    }

    pub(crate) fn to_array(self) -> [f64; 4] {
        [self.pi_s, self.pi_p, self.pi_ion, self.c]
    }
}

/// Per-pulse parameters of the three-level model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PulseParams {
    /// Rabi angle θ = gτ.
    pub theta: f64,
    /// x = Γτ/2.
    pub x: f64,
    /// Γ_cw / γ.
    pub gamma_ratio: f64,
    /// Rabi frequency (rad/s).
    pub g: f64,
    /// Radiative linewidth (rad/s).
    pub gamma: f64,
    /// Pulsed photoionization rate Γ (s⁻¹).
    pub ion_rate: f64,
    /// cw photoionization rate Γ_cw (s⁻¹).
    pub ion_rate_cw: f64,
    /// Pulse duration (s).
    pub tau: f64,
    /// Pulse period (s).
    pub period: f64,
}

impl PulseParams {
    pub fn new(theta: f64, x: f64, gamma_ratio: f64, gamma: f64, tau: f64, period: f64) -> Result<Self, ParamError> {
        let check = |ok: bool, field: &'static str, reason: &str| {
            if ok {
                Ok(())
            } else {
                Err(ParamError::Invalid {
                    field,
                    reason: reason.into(),
                })
            }
        };
        check(theta.is_finite() && theta >= 0.0, "theta", "must be >= 0")?;
        check(x.is_finite() && x >= 0.0, "x", "must be >= 0")?;
        check(
            gamma_ratio.is_finite() && gamma_ratio >= 0.0,
            "gamma_ratio",
            "must be >= 0",
        )?;
        check(gamma.is_finite() && gamma > 0.0, "gamma", "must be > 0")?;
        check(tau.is_finite() && tau > 0.0, "tau", "must be > 0")?;
        check(period.is_finite() && period > tau, "period", "must exceed tau")?;
        Ok(PulseParams {
            theta,
            x,
            gamma_ratio,
            g: theta / tau,
            gamma,
            ion_rate: 2.0 * x / tau,
            ion_rate_cw: gamma_ratio * gamma,
            tau,
            period,
        })
    }

    /// Parameters seen by an atom at the focus.
    pub fn from_lasers(pulse: &PulsedLaser, beam: &BeamGeometry, species: &Species, cw: Option<&CwLaser>) -> Self {
        let intensity = peak_intensity(pulse, beam);
        let g = rabi_frequency(intensity, species);
        let ion_rate = ionization_rate(intensity, species.sigma_pi, pulse.lambda_center);
        let ion_rate_cw = cw.map(CwLaser::ionization_rate).unwrap_or(0.0);
        PulseParams {
            theta: g * pulse.duration,
            x: ion_rate * pulse.duration / 2.0,
            gamma_ratio: ion_rate_cw / species.gamma,
            g,
            gamma: species.gamma,
            ion_rate,
            ion_rate_cw,
            tau: pulse.duration,
            period: pulse.period,
        }
    }

    /// Returns a copy with a different Rabi angle (θ and g updated together).
    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self.g = theta / self.tau;
        self
    }

    /// Flags for the regime assumed by the closed forms: T ≫ 1/γ ≫ τ,
    /// g ≫ Γ and Γ_cw ≪ γ. The period flag fires below γT = 5, where more
    /// than e⁻⁵ of the excited population survives to the next pulse.
    pub fn warnings(&self) -> Vec<Warning> {
        let mut out = Vec::new();
        if self.gamma * self.period < 5.0 {
            out.push(Warning::PeriodNotLong);
        }
        if self.gamma * self.tau > 0.1 {
            out.push(Warning::PulseNotShort);
        }
        if self.g < 10.0 * self.ion_rate {
            out.push(Warning::IonizationNotWeak);
        }
        if self.ion_rate_cw > 0.1 * self.gamma {
            out.push(Warning::CwNotWeak);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::*;

    #[test]
    fn from_lasers_matches_physkit() {
        let cd = Species::cadmium();
        let pulse = PulsedLaser::new(228.9 * NANOMETER, 60.0 * PICOJOULE, PICOSECOND, 12.5 * NANOSECOND).unwrap();
        let beam = BeamGeometry::new(25.0 * MICROMETER, 100.0 * MICROMETER).unwrap();
        let p = PulseParams::from_lasers(&pulse, &beam, &cd, None);
        assert!((p.theta - crate::physkit::rabi_angle(&pulse, &beam, &cd)).abs() < 1e-15);
        assert!((p.ion_rate / 7.04e8 - 1.0).abs() < 0.01);
        assert_eq!(p.ion_rate_cw, 0.0);
        assert!(p.warnings().is_empty(), "{:?}", p.warnings());
    }

    #[test]
    fn regime_flags() {
        let gamma = 2.0 * std::f64::consts::PI * 91e6;
        let p = PulseParams::new(1.0, 0.2, 0.5, gamma, 1e-9, 2e-9).unwrap();
        let w = p.warnings();
        for flag in [
            Warning::PeriodNotLong,
            Warning::PulseNotShort,
            Warning::IonizationNotWeak,
            Warning::CwNotWeak,
        ] {
            assert!(w.contains(&flag), "{flag:?} missing");
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(PulseParams::new(-1.0, 0.0, 0.0, 1.0, 1.0, 2.0).is_err());
        assert!(PulseParams::new(1.0, 0.0, 0.0, 1.0, 1.0, 1.0).is_err());
        assert!(PulseParams::new(1.0, 0.0, 0.0, 0.0, 1.0, 2.0).is_err());
    }
}
