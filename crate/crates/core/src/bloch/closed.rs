//! Closed-form ionization probabilities per pulse period.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::HBAR;
use crate::physkit::{saturation_intensity, BeamGeometry, PulsedLaser, Species};
use crate::warning::Warning;

use super::PulseParams;

// Below this |s| the even power series are used instead of trig functions.
const SERIES_CUTOFF: f64 = 1e-3;

/// (1 − cos √s) / s, continued analytically to s ≤ 0.
fn one_minus_cos_over_s(s: f64) -> f64 {
    if s.abs() < SERIES_CUTOFF {
        0.5 - s / 24.0 + s * s / 720.0 - s * s * s / 40320.0
    } else if s > 0.0 {
        let q = s.sqrt();
        // 1 - cos q = 2 sin²(q/2) avoids cancellation.
        2.0 * (0.5 * q).sin().powi(2) / s
    } else {
        let k = (-s).sqrt();
        2.0 * (0.5 * k).sinh().powi(2) / (-s)
    }
}

/// sin √s / √s, continued analytically to s ≤ 0.
fn sinc_sqrt(s: f64) -> f64 {
    if s.abs() < SERIES_CUTOFF {
        1.0 - s / 6.0 + s * s / 120.0 - s * s * s / 5040.0
    } else if s > 0.0 {
        let q = s.sqrt();
        q.sin() / q
    } else {
        let k = (-s).sqrt();
        k.sinh() / k
    }
}

/// 1 − sin θ / θ, accurate near θ = 0.
fn one_minus_sinc(theta: f64) -> f64 {
    if theta.abs() < 0.1 {
        let t2 = theta * theta;
        t2 / 6.0 - t2 * t2 / 120.0 + t2 * t2 * t2 / 5040.0 - t2.powi(4) / 362_880.0
    } else {
        1.0 - theta.sin() / theta
    }
}

fn clamp_probability(p: f64) -> f64 {
    const EPS: f64 = 1e-12;
    if (-EPS..0.0).contains(&p) {
        0.0
    } else if p > 1.0 && p <= 1.0 + EPS {
        1.0
    } else {
        p
    }
}

fn cw_branching(params: &PulseParams) -> f64 {
    let total = params.ion_rate_cw + params.gamma;
    params.ion_rate_cw / total
}

/// Ionization probability after one period starting in the ground state,
/// valid for any ratio of θ to x. With q² = θ² − x²,
///
/// P = 1 − e⁻ˣ [1 + x²(1 − cos q)/q² + x sin q / q]
///       + ½ e⁻ˣ Γ_cw/(Γ_cw + γ) θ² (1 − cos q)/q².
///
/// For θ < x, q is imaginary and the trigonometric functions continue to
/// their hyperbolic counterparts; at θ = x both ratios take their limits.
pub fn p_ion_closed(params: &PulseParams) -> f64 {
    let (theta, x) = (params.theta, params.x);
    let s = theta * theta - x * x;
    let c1 = one_minus_cos_over_s(s);
    let sc = sinc_sqrt(s);
    let decay = (-x).exp();
    let pulsed = -(-x).exp_m1() - decay * (x * x * c1 + x * sc);
    let cw = 0.5 * decay * cw_branching(params) * theta * theta * c1;
    clamp_probability(pulsed + cw)
}

/// The θ ≫ x limit of [`p_ion_closed`]:
///
/// P = 1 − e^{−Γτ/2} [1 + (Γτ/2) sin θ/θ − Γ_cw/(2(Γ_cw + γ)) (1 − cos θ)].
pub fn p_ion_simplified(params: &PulseParams) -> f64 {
    clamp_probability(pulsed_only_probability(params) + cw_only_probability(params))
}

/// Part of [`p_ion_simplified`] due to the pulsed laser alone.
pub fn pulsed_only_probability(params: &PulseParams) -> f64 {
    let x = params.x;
    // 1 - e^-x (1 + x sinc θ) = (1 - e^-x) - x e^-x + x e^-x (1 - sinc θ)
    let base = -(-x).exp_m1() - x * (-x).exp();
    base + x * (-x).exp() * one_minus_sinc(params.theta)
}

/// Part of [`p_ion_simplified`] due to the cw laser.
pub fn cw_only_probability(params: &PulseParams) -> f64 {
    let half_angle = 0.5 * params.theta;
    0.5 * (-params.x).exp() * cw_branching(params) * 2.0 * half_angle.sin().powi(2)
}

/// Weak-pulse (x ≪ 1) probability in two forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeakLimit {
    /// (Γτ/2)(1 − sin θ/θ).
    pub exact: f64,
    /// θ²Γτ/16.
    pub quadratic: f64,
    /// quadratic / exact − 1 (zero when both vanish).
    pub relative_error: f64,
    /// True when x < 0.1 and θ ≤ π, where the quadratic form is within 25%.
    pub in_range: bool,
}

/// Weak-pulse limit given the Rabi angle and x = Γτ/2.
pub fn p_ion_weak(theta: f64, x: f64) -> WeakLimit {
    let exact = x * one_minus_sinc(theta);
    let quadratic = theta * theta * x / 8.0;
    let relative_error = if exact == 0.0 {
        if quadratic == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        quadratic / exact - 1.0
    };
    WeakLimit {
        exact,
        quadratic,
        relative_error,
        in_range: x < 0.1 && theta <= PI,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FocusProbability {
    pub p0: f64,
    pub warnings: Vec<Warning>,
}

/// Per-pulse ionization probability for an atom at the focus in the weak
/// regime, P⁰ = σγ²ℰ²τ / (8π²ħω I_sat ρ⁴).
pub fn p_ion_focus(pulse: &PulsedLaser, beam: &BeamGeometry, species: &Species) -> FocusProbability {
    let rho2 = beam.waist * beam.waist;
    let p0 = species.sigma_pi * species.gamma.powi(2) * pulse.energy.powi(2) * pulse.duration
        / (8.0 * PI * PI * HBAR * pulse.omega() * saturation_intensity(species) * rho2 * rho2);
    let mut warnings = Vec::new();
    if p0 > 0.1 {
        warnings.push(Warning::FocusProbabilityLarge);
    }
    if crate::physkit::rabi_angle(pulse, beam, species) > PI {
        warnings.push(Warning::RabiAngleLarge);
    }
    FocusProbability { p0, warnings }
}

/// Ratio of pulsed-only to cw-only ionization at matched average intensity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CwRatio {
    pub ratio: f64,
    /// Rabi angle at which the ratio is largest.
    pub theta: f64,
}

/// Compares the two terms of [`p_ion_simplified`] when the cw intensity equals
/// the average pulsed intensity Iτ/T (same cross section and photon energy),
/// i.e. Γ_cw = Γτ/T. The pulsed term is taken to first order in x,
/// x(1 − sin θ/θ): the x²/2 remainder of the θ ≫ x form does not vanish as
/// θ → 0 and would dominate the ratio there. The ratio is maximised over
/// θ ∈ (0, π] on a grid of `grid` points.
pub fn matched_cw_ratio(params: &PulseParams, grid: usize) -> CwRatio {
    let mut matched = *params;
    matched.ion_rate_cw = params.ion_rate * params.tau / params.period;
    matched.gamma_ratio = matched.ion_rate_cw / params.gamma;
    let mut best = CwRatio {
        ratio: f64::NEG_INFINITY,
        theta: 0.0,
    };
    for i in 1..=grid.max(1) {
        let theta = PI * i as f64 / grid.max(1) as f64;
        let p = matched.with_theta(theta);
        let ratio = p.x * one_minus_sinc(theta) / cw_only_probability(&p);
        if ratio > best.ratio {
            best = CwRatio { ratio, theta };
        }
    }
    best
}
