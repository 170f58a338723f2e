//! Physical constants, domain types, preset tables and single-atom
//! quantities derived from them.
//!
//! Conventions: the pulse has a square temporal profile of width τ and a
//! Gaussian transverse profile whose electric field falls to 1/e at the waist
//! ρ, so the peak intensity is I = 2ℰ/(πρ²τ). The saturation intensity is the
//! two-level resonant value I_sat = πhcγ/(3λ³).

use std::f64::consts::PI;

use thiserror::Error;

use crate::constants::{BOLTZMANN, GAUSSIAN_TIME_BANDWIDTH, HBAR, PLANCK, SPEED_OF_LIGHT};

pub mod presets;
mod types;

pub use presets::{species_preset, species_presets, trap_preset, trap_presets, SpeciesPreset};
pub use types::{BeamGeometry, CwLaser, PulsedLaser, Span, Species, TrapKind, TrapPreset, Vapor};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("invalid {field}: {reason}")]
    Invalid { field: &'static str, reason: String },
}

/// Saturation intensity of the ¹S₀ → ¹P₁ transition (W/m²).
pub fn saturation_intensity(species: &Species) -> f64 {
    PI * PLANCK * SPEED_OF_LIGHT * species.gamma / (3.0 * species.lambda_sp.powi(3))
}

/// Peak intensity at the focus (W/m²).
pub fn peak_intensity(pulse: &PulsedLaser, beam: &BeamGeometry) -> f64 {
    2.0 * pulse.energy / (PI * beam.waist * beam.waist * pulse.duration)
}

/// Resonant Rabi frequency g = γ √(I / 2I_sat) (rad/s).
pub fn rabi_frequency(intensity: f64, species: &Species) -> f64 {
    species.gamma * (intensity / (2.0 * saturation_intensity(species))).sqrt()
}

/// Rabi angle θ = gτ accumulated over one pulse at the focus.
pub fn rabi_angle(pulse: &PulsedLaser, beam: &BeamGeometry, species: &Species) -> f64 {
    rabi_frequency(peak_intensity(pulse, beam), species) * pulse.duration
}

/// Photoionization rate Γ = Iσ/ħω out of the ¹P₁ level (s⁻¹).
pub fn ionization_rate(intensity: f64, sigma: f64, lambda: f64) -> f64 {
    intensity * sigma * lambda / (HBAR * 2.0 * PI * SPEED_OF_LIGHT)
}

/// Mean thermal speed v̄ = √(8 k_B T / πm) (m/s).
pub fn mean_speed(vapor: &Vapor) -> f64 {
    (8.0 * BOLTZMANN * vapor.temperature / (PI * vapor.mass)).sqrt()
}

/// Ideal-gas number density n₀ = P / k_B T (m⁻³).
pub fn density_from_pressure(pressure: f64, temperature: f64) -> f64 {
    pressure / (BOLTZMANN * temperature)
}

/// Doppler width v̄/λ (Hz).
pub fn doppler_width(vapor: &Vapor, lambda: f64) -> f64 {
    mean_speed(vapor) / lambda
}

/// FWHM duration (s) of a transform-limited Gaussian pulse with the given FWHM
/// bandwidth (Hz). The relation is its own inverse, so the same function maps
/// a duration back to a bandwidth.
pub fn transform_limit(fwhm: f64) -> f64 {
    GAUSSIAN_TIME_BANDWIDTH / fwhm
}

/// Frequency FWHM (Hz) of a wavelength FWHM `delta_lambda` around `lambda`.
pub fn wavelength_to_frequency_width(delta_lambda: f64, lambda: f64) -> f64 {
    SPEED_OF_LIGHT * delta_lambda / (lambda * lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::*;
    use proptest::prelude::*;

    fn cd() -> Species {
        Species::cadmium()
    }

    fn cd_vapor() -> Vapor {
        Vapor::from_pressure(1e-11 * TORR, 293.0, cd().mass).unwrap()
    }

    fn pulse(e_pj: f64, tau_ps: f64) -> PulsedLaser {
        PulsedLaser::new(
            228.9 * NANOMETER,
            e_pj * PICOJOULE,
            tau_ps * PICOSECOND,
            12.5 * NANOSECOND,
        )
        .unwrap()
    }

    fn beam(rho_um: f64) -> BeamGeometry {
        BeamGeometry::new(rho_um * MICROMETER, 100.0 * MICROMETER).unwrap()
    }

    #[test]
    fn cadmium_saturation_intensity() {
        // π h c γ / 3λ³ with γ = 2π·91 MHz, λ = 228.9 nm, evaluated by hand.
        let isat = saturation_intensity(&cd()) / WATT_PER_SQ_CENTIMETER;
        assert!((isat - 0.99172).abs() < 1e-4, "{isat}");
    }

    #[test]
    fn saturation_scaling() {
        let s = cd();
        let base = saturation_intensity(&s);
        let mut s2 = s.clone();
        s2.gamma *= 2.0;
        assert!((saturation_intensity(&s2) / base - 2.0).abs() < 1e-14);
        let mut s3 = s.clone();
        s3.lambda_sp *= 2.0;
        assert!((saturation_intensity(&s3) / base - 0.125).abs() < 1e-14);
    }

    #[test]
    fn peak_intensity_reference() {
        let i = peak_intensity(&pulse(60.0, 1.0), &beam(25.0));
        assert!((i / 6.111_549_8e10 - 1.0).abs() < 1e-6, "{i}");
        assert_eq!(peak_intensity(&pulse(0.0, 1.0), &beam(25.0)), 0.0);
    }

    #[test]
    fn rabi_angle_reference() {
        let theta = rabi_angle(&pulse(60.0, 1.0), &beam(25.0), &cd());
        assert!((theta - 1.0037).abs() < 1e-3, "{theta}");
        assert_eq!(rabi_angle(&pulse(0.0, 1.0), &beam(25.0), &cd()), 0.0);
        let t4 = rabi_angle(&pulse(240.0, 1.0), &beam(25.0), &cd());
        assert!((t4 / theta - 2.0).abs() < 1e-14);
    }

    #[test]
    fn ionization_rate_reference() {
        let gamma = ionization_rate(6.1e10, 1e-16 * SQ_CENTIMETER, 228.9 * NANOMETER);
        assert!((gamma / 7.03e8 - 1.0).abs() < 0.01, "{gamma}");
        assert_eq!(ionization_rate(0.0, 1e-20, 228.9e-9), 0.0);
        let doubled = ionization_rate(6.1e10, 2e-20, 228.9e-9);
        assert!((doubled / gamma - 2.0).abs() < 1e-14);
    }

    #[test]
    fn cadmium_vapor_numbers() {
        let v = cd_vapor();
        let vbar = mean_speed(&v);
        assert!((vbar - 240.0).abs() / 240.0 < 0.03, "{vbar}");
        let n_cm3 = v.density / PER_CUBIC_CENTIMETER;
        assert!((n_cm3 - 3e5).abs() / 3e5 < 0.15, "{n_cm3}");
        assert_eq!(density_from_pressure(0.0, 293.0), 0.0);
        let dw = doppler_width(&v, 228.9 * NANOMETER);
        assert!((dw / 1.03e9 - 1.0).abs() < 0.01, "{dw}");
    }

    #[test]
    fn vapor_scaling() {
        let v = cd_vapor();
        let hot = Vapor::new(v.density, 4.0 * v.temperature, v.mass).unwrap();
        assert!((mean_speed(&hot) / mean_speed(&v) - 2.0).abs() < 1e-14);
        let heavy = Vapor::new(v.density, v.temperature, 4.0 * v.mass).unwrap();
        assert!((mean_speed(&heavy) / mean_speed(&v) - 0.5).abs() < 1e-14);
        let p = 1e-9;
        assert!((density_from_pressure(2.0 * p, 293.0) / density_from_pressure(p, 293.0) - 2.0).abs() < 1e-14);
        assert!((doppler_width(&v, 2.0 * 228.9e-9) / doppler_width(&v, 228.9e-9) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn transform_limited_pulses() {
        let bw = wavelength_to_frequency_width(6.0 * NANOMETER, 915.0 * NANOMETER);
        assert!((bw / 2.15e12 - 1.0).abs() < 0.01);
        let tau = transform_limit(bw);
        assert!((tau / FEMTOSECOND - 205.0).abs() < 1.0, "{tau}");
        let tau400 = transform_limit(400.0 * GIGAHERTZ);
        assert!((tau400 / PICOSECOND - 1.1).abs() < 0.01);
        let x = 3.7e11;
        assert!((transform_limit(transform_limit(x)) / x - 1.0).abs() < 1e-15);
    }

    #[test]
    fn constructors_reject_bad_values() {
        assert!(Species::new("x", 100e-9, 200e-9, 1.0, 1.0, 1.0).is_err());
        assert!(Species::new("x", 300e-9, 200e-9, 0.0, 1.0, 1.0).is_err());
        assert!(PulsedLaser::new(228e-9, 1e-12, 1e-9, 1e-9).is_err());
        assert!(PulsedLaser::new(228e-9, -1.0, 1e-12, 1e-9).is_err());
        assert!(BeamGeometry::new(0.0, 1.0).is_err());
        assert!(Vapor::new(1.0, 0.0, 1.0).is_err());
        assert!(CwLaser::new(-1.0, 214e-9, 1e-20).is_err());
    }

    #[test]
    fn rayleigh_and_volume_flags() {
        use crate::warning::Warning;
        assert!(beam(10.0).warnings(228.9e-9).is_empty());
        assert_eq!(beam(25.0).warnings(228.9e-9), vec![Warning::LoadingVolumeStubby]);
        let tight = BeamGeometry::new(2.0e-6, 100e-6).unwrap();
        assert!(tight.warnings(228.9e-9).contains(&Warning::RayleighRangeShort));
        let stubby = BeamGeometry::new(25e-6, 60e-6).unwrap();
        assert!(stubby.warnings(228.9e-9).contains(&Warning::LoadingVolumeStubby));
    }

    // Unit audit: scale every input by the factor of its unit and check the
    // output changes by the power predicted from its dimensions.
    proptest! {
        #[test]
        fn unit_audit(k in 0.1f64..10.0) {
            let s = cd();
            let p = pulse(60.0, 1.0);
            let b = beam(25.0);
            let close = |a: f64, b: f64| (a / b - 1.0).abs() < 1e-12;

            // lengths x k: I_sat ~ L^-3, peak intensity ~ L^-2
            let mut sl = s.clone();
            sl.lambda_sp *= k;
            prop_assert!(close(saturation_intensity(&sl), saturation_intensity(&s) / k.powi(3)));
            let bl = BeamGeometry::new(b.waist * k, b.overlap_length * k).unwrap();
            prop_assert!(close(peak_intensity(&p, &bl), peak_intensity(&p, &b) / (k * k)));

            // time x k (and rates / k): θ = γ τ √(I/I_sat) with I ~ 1/τ, I_sat ~ γ, so θ is invariant
            let pt = PulsedLaser::new(p.lambda_center, p.energy, p.duration * k, p.period * k).unwrap();
            let mut st = s.clone();
            st.gamma /= k;
            let ratio = rabi_angle(&pt, &b, &st) / rabi_angle(&p, &b, &s);
            prop_assert!(close(ratio, 1.0));

            // energy x k: Γ ~ I ~ E
            let pe = PulsedLaser::new(p.lambda_center, p.energy * k, p.duration, p.period).unwrap();
            let g1 = ionization_rate(peak_intensity(&pe, &b), s.sigma_pi, s.lambda_sp);
            let g0 = ionization_rate(peak_intensity(&p, &b), s.sigma_pi, s.lambda_sp);
            prop_assert!(close(g1, g0 * k));

            // temperature x k: v̄ ~ √T ; mass x k: v̄ ~ 1/√m
            let v = cd_vapor();
            let vt = Vapor::new(v.density, v.temperature * k, v.mass).unwrap();
            prop_assert!(close(mean_speed(&vt), mean_speed(&v) * k.sqrt()));
            let vm = Vapor::new(v.density, v.temperature, v.mass * k).unwrap();
            prop_assert!(close(mean_speed(&vm), mean_speed(&v) / k.sqrt()));
        }

        #[test]
        fn derived_quantities_are_pure(e in 0.0f64..500.0, rho in 1.0f64..100.0) {
            let p = pulse(e, 1.0);
            let b = beam(rho);
            prop_assert_eq!(rabi_angle(&p, &b, &cd()).to_bits(), rabi_angle(&p, &b, &cd()).to_bits());
            prop_assert_eq!(peak_intensity(&p, &b).to_bits(), peak_intensity(&p, &b).to_bits());
        }
    }
}
