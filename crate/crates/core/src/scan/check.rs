//! Cross-checks of the three flux methods on random weak-regime inputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constants::{MICROMETER, NANOSECOND, PER_CUBIC_CENTIMETER};
use crate::physkit::{Species, Vapor};
use crate::vaporflux::{
    flux_analytic, flux_monte_carlo, flux_quadrature, flux_quadrature_exact, weak_regime_probe, LoadingVolume,
};
use crate::Error;

/// Largest relative analytic/quadrature difference accepted.
pub const ANALYTIC_TOLERANCE: f64 = 5e-3;
/// Monte Carlo agreement, in standard errors.
pub const MC_SIGMAS: f64 = 3.0;
/// Relative tolerance of the cap-aware quadrature.
pub const EXACT_REL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriangleCase {
    pub density: f64,
    pub temperature: f64,
    pub waist: f64,
    pub length: f64,
    pub p0: f64,
    pub period: f64,
    pub analytic: f64,
    pub quadrature: f64,
    /// Cap-aware quadrature, the reference for the Monte Carlo estimate.
    pub quadrature_exact: f64,
    pub monte_carlo: f64,
    pub stderr: f64,
    pub analytic_ok: bool,
    pub monte_carlo_ok: bool,
}

impl TriangleCase {
    pub fn passed(&self) -> bool {
        self.analytic_ok && self.monte_carlo_ok
    }
}

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.gen::<f64>() * (hi / lo).ln()).exp()
}

/// Draws `sets` weak-regime parameter sets from `seed` and evaluates all
/// three methods on each. Monte Carlo uses `samples` trajectories.
pub fn oracle_triangle(sets: usize, samples: usize, seed: u64) -> Result<Vec<TriangleCase>, Error> {
    let mass = Species::cadmium().mass;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(sets);
    for i in 0..sets {
        let vapor = Vapor::new(
            log_uniform(&mut rng, 1e4, 1e7) * PER_CUBIC_CENTIMETER,
            rng.gen_range(250.0..600.0),
            mass,
        )?;
        let waist = rng.gen_range(10.0..50.0) * MICROMETER;
        let volume = LoadingVolume::new(waist, rng.gen_range(5.0..20.0) * waist)?;
        let period = log_uniform(&mut rng, 5.0, 50.0) * NANOSECOND;
        let mut p0 = log_uniform(&mut rng, 1e-5, 1e-2);
        // Stay inside the weak regime.
        let probe = weak_regime_probe(&vapor, &volume, p0, period)?;
        if probe > 0.05 {
            p0 *= 0.05 / probe;
        }
        let analytic = flux_analytic(&vapor, &volume, p0, period)?.flux;
        let quadrature = flux_quadrature(&vapor, &volume, p0, period)?.flux;
        let exact = flux_quadrature_exact(&vapor, &volume, p0, period, EXACT_REL)?.flux;
        let mc = flux_monte_carlo(&vapor, &volume, p0, period, samples, seed.wrapping_add(i as u64))?;
        let stderr = mc.stderr.unwrap_or(0.0);
        out.push(TriangleCase {
            density: vapor.density,
            temperature: vapor.temperature,
            waist,
            length: volume.length,
            p0,
            period,
            analytic,
            quadrature,
            quadrature_exact: exact,
            monte_carlo: mc.flux,
            stderr,
            analytic_ok: ((analytic - quadrature) / analytic).abs() < ANALYTIC_TOLERANCE,
            monte_carlo_ok: (mc.flux - exact).abs() <= MC_SIGMAS * stderr,
        });
    }
    Ok(out)
}
