//! From the per-pulse focus probability to trap loading.
//!
//! An atom enters the cylindrical loading volume (radius ρ, length L) at
//! polar angle θ′ from the surface normal and azimuth φ′ (φ′ = 0 heads through
//! the beam axis). Along its straight path it meets pulses every vT, each
//! ionizing with probability P̃⁰ exp(−4ζ²/w²). Averaging the accumulated
//! probability over a thermal vapor gives the ion flux through the cylinder
//! surface, the loading rate and the efficiency.

use serde::Serialize;
use thiserror::Error;

use crate::physkit::{BeamGeometry, ParamError};
use crate::quadrature::QuadError;
use crate::warning::Warning;

mod flux;
mod geometry;
mod montecarlo;

pub use flux::{
    angular_constant, angular_integrand, efficiency, engineering_coefficients, flux_analytic, flux_quadrature,
    flux_quadrature_exact, flux_saturated, loading_rate, weak_regime_probe, Efficiency, EngineeringCoefficients,
};
pub use geometry::{effective_waist, p_net_integral, p_net_product, peak_prob_on_trajectory, NetProbability};
pub use montecarlo::{flux_monte_carlo, pairwise_sum, sample_trajectory, MIN_SAMPLES};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FluxError {
    #[error("degenerate trajectory: sin²θ′cos²φ′ = 1 (grazing the cylinder along its axis)")]
    DegenerateTrajectory,
    #[error("entry angle θ′ = {0} outside [0, π/2)")]
    AngleOutOfRange(f64),
    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("monte carlo needs at least 10000 samples, got {0}")]
    TooFewSamples(usize),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Param(#[from] ParamError),
}

/// An atom's straight path through the loading volume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Trajectory {
    /// Polar entry angle θ′ ∈ [0, π/2) from the surface normal.
    pub theta_p: f64,
    /// Azimuthal entry angle φ′ ∈ [0, 2π).
    pub phi_p: f64,
    /// Speed (m/s).
    pub speed: f64,
    /// Position offset of the atom at one pulse, ζ₀ ∈ [0, vT) (m).
    pub zeta0: f64,
    /// Axial entry position along the cylinder, ∈ [0, L] (m).
    pub entry_z: f64,
}

/// Cylinder of radius ρ (the beam waist) and length L.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoadingVolume {
    pub waist: f64,
    pub length: f64,
}

impl LoadingVolume {
    pub fn new(waist: f64, length: f64) -> Result<Self, ParamError> {
        let b = BeamGeometry::new(waist, length)?;
        Ok(b.into())
    }

    /// Lateral surface area 2πρL.
    pub fn surface_area(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.waist * self.length
    }

    pub fn warnings(&self) -> Vec<Warning> {
        if self.length < 5.0 * self.waist {
            vec![Warning::LoadingVolumeStubby]
        } else {
            Vec::new()
        }
    }
}

impl From<BeamGeometry> for LoadingVolume {
    fn from(b: BeamGeometry) -> Self {
        LoadingVolume {
            waist: b.waist,
            length: b.overlap_length,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Analytic,
    Quadrature,
    MonteCarlo,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

/// Flux of ionized atoms through the cylinder surface and what follows
/// from it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluxResult {
    /// Φ_ion (m⁻² s⁻¹).
    pub flux: f64,
    /// R_ion = Φ_ion · 2πρL (s⁻¹).
    pub rate: f64,
    /// η = Φ_ion / Φ₀ with Φ₀ = n₀v̄/4.
    pub efficiency: f64,
    pub method: Method,
    /// Standard error of `flux` (Monte Carlo only).
    pub stderr: Option<f64>,
    pub warnings: Vec<Warning>,
}
