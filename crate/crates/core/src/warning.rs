//! Structured validity warnings.
//!
//! The closed-form results are only valid inside particular parameter regimes.
//! When a calculation leaves that regime it still returns a number, together
//! with one or more of these flags. Each flag has a stable short code used in
//! CSV output.

use std::fmt;

use serde::{Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Warning {
    /// Rayleigh range pi rho^2 / lambda is below 5 L.
    RayleighRangeShort,
    /// Overlap length L is below 5 rho, so end caps of the loading volume matter.
    LoadingVolumeStubby,
    /// The pulse period is not much longer than the excited-state lifetime.
    PeriodNotLong,
    /// The pulse is not much shorter than the excited-state lifetime.
    PulseNotShort,
    /// Photoionization rate is not small compared with the Rabi frequency.
    IonizationNotWeak,
    /// cw ionization rate is not small compared with the radiative linewidth.
    CwNotWeak,
    /// Per-pulse focus probability exceeds 0.1.
    FocusProbabilityLarge,
    /// Atoms move more than a third of the effective waist between pulses.
    SparsePulses,
    /// Accumulated probability along a trajectory is not small.
    TrajectoryProbabilityLarge,
    /// Weak-regime flux formula is outside its validity range.
    WeakRegimeViolated,
    /// Efficiency reached 1 and was clamped.
    EfficiencyClamped,
    /// Rate was capped by the saturated wall flux.
    SaturatedFluxCap,
    /// The Rabi angle exceeds pi, beyond the range of the quadratic approximation.
    RabiAngleLarge,
}

impl Warning {
    pub fn code(self) -> &'static str {
        match self {
            Warning::RayleighRangeShort => "rayleigh_short",
            Warning::LoadingVolumeStubby => "volume_stubby",
            Warning::PeriodNotLong => "period_not_long",
            Warning::PulseNotShort => "pulse_not_short",
            Warning::IonizationNotWeak => "ionization_not_weak",
            Warning::CwNotWeak => "cw_not_weak",
            Warning::FocusProbabilityLarge => "p0_large",
            Warning::SparsePulses => "sparse_pulses",
            Warning::TrajectoryProbabilityLarge => "p_net_large",
            Warning::WeakRegimeViolated => "weak_regime_violated",
            Warning::EfficiencyClamped => "efficiency_clamped",
            Warning::SaturatedFluxCap => "saturated_cap",
            Warning::RabiAngleLarge => "theta_gt_pi",
        }
    }
}

impl Warning {
    pub const ALL: [Warning; 13] = [
        Warning::RayleighRangeShort,
        Warning::LoadingVolumeStubby,
        Warning::PeriodNotLong,
        Warning::PulseNotShort,
        Warning::IonizationNotWeak,
        Warning::CwNotWeak,
        Warning::FocusProbabilityLarge,
        Warning::SparsePulses,
        Warning::TrajectoryProbabilityLarge,
        Warning::WeakRegimeViolated,
        Warning::EfficiencyClamped,
        Warning::SaturatedFluxCap,
        Warning::RabiAngleLarge,
    ];

    pub fn from_code(code: &str) -> Option<Warning> {
        Warning::ALL.into_iter().find(|w| w.code() == code)
    }
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Appends `w` unless it is already present.
pub(crate) fn push_unique(list: &mut Vec<Warning>, w: Warning) {
    if !list.contains(&w) {
        list.push(w);
    }
}

/// Joins warning codes with `;`, the CSV convention.
pub fn join_codes(list: &[Warning]) -> String {
    list.iter().map(|w| w.code()).collect::<Vec<_>>().join(";")
}

impl Serialize for Warning {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_round_trip() {
        for w in Warning::ALL {
            assert_eq!(Warning::from_code(w.code()), Some(w));
        }
        assert_eq!(Warning::from_code("nope"), None);
        assert_eq!(
            join_codes(&[Warning::SparsePulses, Warning::SaturatedFluxCap]),
            "sparse_pulses;saturated_cap"
        );
        assert_eq!(join_codes(&[]), "");
    }
}
