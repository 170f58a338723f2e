use std::cell::Cell;
use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::bloch::p_ion_focus;
use crate::constants::{MICROMETER, PER_CUBIC_CENTIMETER, PICOJOULE, PICOSECOND};
use crate::physkit::{BeamGeometry, PulsedLaser, Species, Vapor};
use crate::quadrature::{integrate, integrate_2d, QuadError, Tolerance};
use crate::warning::{push_unique, Warning};

use super::geometry::{
    dense_complement, effective_waist, p_net_integral, peak_prob_on_trajectory, survival_complement,
};
use super::{FluxError, FluxResult, LoadingVolume, Method, Trajectory};

const WEAK_LIMIT: f64 = 0.1;

/// Integrand of the angular constant in the entry angles,
/// sinθ′cosθ′ (1 − sin²θ′cos²φ′)^(−1/2) exp(−4sin²θ′sin²φ′ / (1 − sin²θ′cos²φ′)).
pub fn angular_integrand(theta_p: f64, phi_p: f64) -> f64 {
    let (s, c) = theta_p.sin_cos();
    let d = 1.0 - (s * phi_p.cos()).powi(2);
    if d <= 0.0 {
        return 0.0;
    }
    s * c / d.sqrt() * (-4.0 * (s * phi_p.sin()).powi(2) / d).exp()
}

// Same integrand after u = cosθ′, which absorbs the sinθ′ Jacobian.
fn angular_integrand_u(u: f64, phi_p: f64) -> f64 {
    let sin2 = 1.0 - u * u;
    let d = 1.0 - sin2 * phi_p.cos().powi(2);
    if d <= 0.0 {
        return 0.0;
    }
    u / d.sqrt() * (-4.0 * sin2 * phi_p.sin().powi(2) / d).exp()
}

/// Hemisphere integral of [`angular_integrand`] over θ′ ∈ [0, π/2),
/// φ′ ∈ [0, 2π), to relative tolerance `rel`.
pub fn angular_constant(rel: f64) -> Result<f64, QuadError> {
    // The integrand is even in φ′ about 0 and π/2.
    // The quarter integral is ≈ 0.44, which sets the absolute scale.
    let tol = Tolerance::relative(rel).with_abs(0.1 * rel);
    let quarter = integrate_2d(
        |phi_p, u| angular_integrand_u(u, phi_p),
        (0.0, FRAC_PI_2),
        (0.0, 1.0),
        tol,
    )?;
    Ok(4.0 * quarter.value)
}

/// Saturated wall flux Φ₀ = n₀v̄/4 (m⁻² s⁻¹).
pub fn flux_saturated(vapor: &Vapor) -> f64 {
    vapor.density * vapor.mean_speed() / 4.0
}

/// P_net for the most exposed slow atom: normal incidence at v̄/3.
pub fn weak_regime_probe(vapor: &Vapor, volume: &LoadingVolume, p0: f64, period: f64) -> Result<f64, FluxError> {
    let traj = Trajectory {
        theta_p: 0.0,
        phi_p: 0.0,
        speed: vapor.mean_speed() / 3.0,
        zeta0: 0.0,
        entry_z: 0.0,
    };
    Ok(p_net_integral(&traj, p0, period, volume.waist)?.value)
}

fn weak_warnings(vapor: &Vapor, volume: &LoadingVolume, p0: f64, period: f64) -> Result<Vec<Warning>, FluxError> {
    let mut warnings = volume.warnings();
    if weak_regime_probe(vapor, volume, p0, period)? > WEAK_LIMIT {
        warnings.push(Warning::WeakRegimeViolated);
    }
    Ok(warnings)
}

fn check_inputs(p0: f64, period: f64) -> Result<(), FluxError> {
    if !(0.0..=1.0).contains(&p0) {
        return Err(FluxError::ProbabilityOutOfRange(p0));
    }
    if !(period.is_finite() && period > 0.0) {
        return Err(crate::physkit::ParamError::Invalid {
            field: "period",
            reason: "must be > 0".into(),
        }
        .into());
    }
    Ok(())
}

fn analytic_flux(vapor: &Vapor, volume: &LoadingVolume, p0: f64, period: f64) -> f64 {
    vapor.density * volume.waist * p0 / (8.0 * period)
}

fn result(vapor: &Vapor, volume: &LoadingVolume, flux: f64, method: Method, mut warnings: Vec<Warning>) -> FluxResult {
    let saturated = flux_saturated(vapor);
    let mut eff = if saturated > 0.0 { flux / saturated } else { 0.0 };
    if eff > 1.0 {
        eff = 1.0;
        push_unique(&mut warnings, Warning::EfficiencyClamped);
    }
    FluxResult {
        flux,
        rate: flux * volume.surface_area(),
        efficiency: eff,
        method,
        stderr: None,
        warnings,
    }
}

/// Weak-regime ion flux through the cylinder surface, Φ_ion = n₀ρP⁰/(8T).
pub fn flux_analytic(vapor: &Vapor, volume: &LoadingVolume, p0: f64, period: f64) -> Result<FluxResult, FluxError> {
    check_inputs(p0, period)?;
    let warnings = weak_warnings(vapor, volume, p0, period)?;
    let flux = analytic_flux(vapor, volume, p0, period);
    let mut out = result(vapor, volume, flux, Method::Analytic, warnings);
    out.efficiency = efficiency(volume, p0, vapor, period)?.value;
    Ok(out)
}

/// R_ion = Φ_ion · 2πρL = πn₀ρ²LP⁰/(4T) (s⁻¹).
pub fn loading_rate(vapor: &Vapor, volume: &LoadingVolume, p0: f64, period: f64) -> Result<f64, FluxError> {
    Ok(flux_analytic(vapor, volume, p0, period)?.rate)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Efficiency {
    pub value: f64,
    pub warnings: Vec<Warning>,
}

/// Fraction of atoms crossing the cylinder surface that are ionized,
/// η = P⁰ρ/(2v̄T), clamped at 1.
pub fn efficiency(volume: &LoadingVolume, p0: f64, vapor: &Vapor, period: f64) -> Result<Efficiency, FluxError> {
    check_inputs(p0, period)?;
    let mut warnings = weak_warnings(vapor, volume, p0, period)?;
    let mut value = p0 * volume.waist / (2.0 * vapor.mean_speed() * period);
    if value > 1.0 {
        value = 1.0;
        warnings.push(Warning::EfficiencyClamped);
    }
    Ok(Efficiency { value, warnings })
}

/// Weak-regime flux by direct integration over the entry hemisphere and the
/// Maxwell–Boltzmann speed distribution f(v) = n₀(a/π)^{3/2} e^{−av²},
/// a = 4/(πv̄²). P_net ∝ 1/v, so the speed integral reduces to ∫v²f dv.
pub fn flux_quadrature(vapor: &Vapor, volume: &LoadingVolume, p0: f64, period: f64) -> Result<FluxResult, FluxError> {
    check_inputs(p0, period)?;
    let warnings = weak_warnings(vapor, volume, p0, period)?;
    let tol = Tolerance::relative(1e-7);

    let vbar = vapor.mean_speed();
    let a = 4.0 / (PI * vbar * vbar);
    let norm = vapor.density * (a / PI).powf(1.5);
    // ∫₀^∞ v² f(v) dv, with v = x·v̄ and the tail beyond 12 v̄ dropped.
    let speed_moment =
        norm * vbar.powi(3) * integrate(|x| x * x * (-a * vbar * vbar * x * x).exp(), 0.0, 12.0, tol)?.value;

    let angular = angular_constant(1e-6)?;
    let flux = speed_moment * angular * p0 * (PI / 4.0).sqrt() * volume.waist / period;
    Ok(result(vapor, volume, flux, Method::Quadrature, warnings))
}

/// Ion flux with the full survival product, valid at any P⁰.
///
/// Φ = Φ₀ ⟨P_net⟩, the average running over the flux-weighted speed
/// distribution (s = av² is Gamma(2)-distributed), cosθ′-weighted directions
/// and a uniform pulse phase ζ₀. Integrated to relative tolerance `rel`.
pub fn flux_quadrature_exact(
    vapor: &Vapor,
    volume: &LoadingVolume,
    p0: f64,
    period: f64,
    rel: f64,
) -> Result<FluxResult, FluxError> {
    check_inputs(p0, period)?;
    let mut warnings = volume.warnings();
    let saturated = flux_saturated(vapor);
    if p0 == 0.0 || saturated == 0.0 {
        return Ok(result(vapor, volume, 0.0, Method::Quadrature, warnings));
    }
    let vbar = vapor.mean_speed();
    let a = 4.0 / (PI * vbar * vbar);
    let rho = volume.waist;
    // Weak-regime estimate of ⟨P_net⟩, the scale for absolute tolerances.
    let scale = (p0 * rho / (2.0 * vbar * period)).min(1.0);
    let failure: Cell<Option<FluxError>> = Cell::new(None);

    // Inner integral over t = √s ∈ [0, 7]: ∫ 2t³e^{−t²} ⟨P_net⟩ dt.
    let over_speed = |u: f64, phi_p: f64| -> f64 {
        let theta_p = u.clamp(0.0, 1.0).acos();
        let (peak, w) = match (
            peak_prob_on_trajectory(theta_p, phi_p, p0),
            effective_waist(theta_p, phi_p, rho),
        ) {
            (Ok(p), Ok(w)) => (p, w),
            _ => return 0.0,
        };
        let inner = integrate(
            |t| {
                if t <= 0.0 {
                    return 0.0;
                }
                let speed = t / a.sqrt();
                2.0 * t.powi(3) * (-t * t).exp() * phase_average(peak, w, speed * period, rel)
            },
            0.0,
            7.0,
            Tolerance::relative(rel / 10.0).with_abs(rel * 1e-2 * scale),
        );
        match inner {
            Ok(e) => e.value,
            Err(e) => {
                let prev = failure.take();
                failure.set(prev.or(Some(e.into())));
                0.0
            }
        }
    };
    let quarter = integrate_2d(
        |phi_p, u| u * over_speed(u, phi_p),
        (0.0, FRAC_PI_2),
        (0.0, 1.0),
        Tolerance::relative(rel).with_abs(rel * 0.1 * scale),
    )?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let mean_p = (4.0 / PI * quarter.value).clamp(0.0, 1.0);
    if mean_p > WEAK_LIMIT {
        push_unique(&mut warnings, Warning::TrajectoryProbabilityLarge);
    }
    Ok(result(vapor, volume, saturated * mean_p, Method::Quadrature, warnings))
}

// Mean of the survival complement over ζ₀ ∈ [0, spacing), by the periodic
// trapezoid rule with doubling until successive estimates agree to `rel`.
fn phase_average(peak: f64, w: f64, spacing: f64, rel: f64) -> f64 {
    if spacing < w / 8.0 {
        // The lattice sum then differs from its integral by terms of order
        // exp(−π²w²/4k·spacing²) ≤ exp(−158/k) in the k-th power of P̃⁰.
        return dense_complement(peak, w, spacing);
    }
    let mut m = 8 * (spacing / w).ceil().max(1.0) as usize;
    let mut sum: f64 = (0..m)
        .map(|k| survival_complement(peak, w, spacing, spacing * k as f64 / m as f64))
        .sum();
    let mut mean = sum / m as f64;
    for _ in 0..12 {
        // Midpoints of the current grid.
        let mid: f64 = (0..m)
            .map(|k| survival_complement(peak, w, spacing, spacing * (k as f64 + 0.5) / m as f64))
            .sum();
        sum += mid;
        m *= 2;
        let next = sum / m as f64;
        let converged = (next - mean).abs() <= rel * next.abs() + 1e-300;
        mean = next;
        if converged {
            break;
        }
    }
    mean
}

/// Practical-unit coefficients of the closed-form results for one species,
/// vapor and pulse period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EngineeringCoefficients {
    /// P⁰ ≃ c·ℰ²τ/ρ⁴ with ℰ in pJ, τ in ps, ρ in µm.
    pub p0: f64,
    /// R_ion ≃ c·ℰ²(L/ρ²)(τ/T) in s⁻¹ with ℰ in pJ and L, ρ in µm.
    pub rate: f64,
    /// η ≃ c·ℰ²τ/ρ³ with ℰ in pJ, τ in ps, ρ in µm.
    pub efficiency: f64,
}

pub fn engineering_coefficients(
    species: &Species,
    vapor: &Vapor,
    period: f64,
) -> Result<EngineeringCoefficients, FluxError> {
    let pulse = PulsedLaser::new(species.lambda_sp, PICOJOULE, PICOSECOND, period.max(2.0 * PICOSECOND))?;
    let beam = BeamGeometry::new(MICROMETER, 5.0 * MICROMETER)?;
    let p0 = p_ion_focus(&pulse, &beam, species).p0;
    let density_um3 = vapor.density / PER_CUBIC_CENTIMETER * 1e-12;
    Ok(EngineeringCoefficients {
        p0,
        rate: PI * density_um3 * p0 / 4.0 / PICOSECOND,
        efficiency: p0 * MICROMETER / (2.0 * vapor.mean_speed() * period),
    })
}
