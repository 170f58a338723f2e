use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::physkit::Vapor;
use crate::warning::Warning;

use super::flux::flux_saturated;
use super::geometry::p_net_product;
use super::{FluxError, FluxResult, LoadingVolume, Method, Trajectory};

pub const MIN_SAMPLES: usize = 10_000;

/// Sum by recursive halving; the grouping depends only on the length, so the
/// result is reproducible and the rounding error grows as log n.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 32 {
        return values.iter().sum();
    }
    let (left, right) = values.split_at(values.len() / 2);
    pairwise_sum(left) + pairwise_sum(right)
}

// Uniform on (0, 1].
fn open_unit<R: Rng>(rng: &mut R) -> f64 {
    1.0 - rng.gen::<f64>()
}

/// Draws an atom crossing the cylinder side wall: uniform entry point,
/// direction weighted by cosθ′, speed from the flux-weighted Maxwell–Boltzmann
/// distribution ∝ v³e^{−av²} and a uniform pulse phase.
pub fn sample_trajectory<R: Rng>(rng: &mut R, vapor: &Vapor, volume: &LoadingVolume, period: f64) -> Trajectory {
    let entry_z = rng.gen::<f64>() * volume.length;
    let phi_p = 2.0 * PI * rng.gen::<f64>();
    let theta_p = open_unit(rng).sqrt().acos();
    // av² is Gamma(2, 1): the sum of two unit exponentials.
    let s = -(open_unit(rng) * open_unit(rng)).ln();
    let vbar = vapor.mean_speed();
    let speed = (s * PI / 4.0).sqrt() * vbar;
    let zeta0 = rng.gen::<f64>() * speed * period;
    Trajectory {
        theta_p,
        phi_p,
        speed,
        zeta0,
        entry_z,
    }
}

/// Monte Carlo estimate of the ion flux using the exact survival product on
/// every trajectory. Trajectory `i` draws from ChaCha8 stream `i` of `seed`,
/// so the result does not depend on the number of threads.
pub fn flux_monte_carlo(
    vapor: &Vapor,
    volume: &LoadingVolume,
    p0: f64,
    period: f64,
    n_samples: usize,
    seed: u64,
) -> Result<FluxResult, FluxError> {
    if n_samples < MIN_SAMPLES {
        return Err(FluxError::TooFewSamples(n_samples));
    }
    if !(0.0..=1.0).contains(&p0) {
        return Err(FluxError::ProbabilityOutOfRange(p0));
    }
    let probs = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let traj = sample_trajectory(&mut rng, vapor, volume, period);
            p_net_product(&traj, p0, period, volume.waist)
        })
        .collect::<Result<Vec<f64>, FluxError>>()?;

    let n = n_samples as f64;
    let mean = pairwise_sum(&probs) / n;
    let squares: Vec<f64> = probs.iter().map(|p| (p - mean) * (p - mean)).collect();
    let variance = pairwise_sum(&squares) / (n - 1.0);

    let saturated = flux_saturated(vapor);
    let mut warnings = volume.warnings();
    if mean > 0.1 {
        warnings.push(Warning::TrajectoryProbabilityLarge);
    }
    Ok(FluxResult {
        flux: saturated * mean,
        rate: saturated * mean * volume.surface_area(),
        efficiency: mean,
        method: Method::MonteCarlo,
        stderr: Some(saturated * (variance / n).sqrt()),
        warnings,
    })
}
