use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::warning::Warning;

use super::{FluxError, Trajectory};

// |ζ| beyond which exp(−4ζ²/w²) < 1e-16: ζ = (w/2)√(ln 1e16).
const CUTOFF_IN_HALF_WAISTS: f64 = 6.069_726_104_119_736;

// Above this many pulses per transit the lattice sum is replaced by its
// integral, whose error is of order exp(−π²w²/4(vT)²).
const DENSE_PULSE_COUNT: f64 = 2.0e5;

fn transverse_fraction(theta_p: f64, phi_p: f64) -> Result<f64, FluxError> {
    if !(0.0..FRAC_PI_2).contains(&theta_p) {
        return Err(FluxError::AngleOutOfRange(theta_p));
    }
    let d = 1.0 - (theta_p.sin() * phi_p.cos()).powi(2);
    if d <= 0.0 {
        return Err(FluxError::DegenerateTrajectory);
    }
    Ok(d)
}

fn check_probability(p0: f64) -> Result<(), FluxError> {
    if (0.0..=1.0).contains(&p0) {
        Ok(())
    } else {
        Err(FluxError::ProbabilityOutOfRange(p0))
    }
}

/// Width of the Gaussian profile seen along the trajectory,
/// w = ρ / √(1 − sin²θ′cos²φ′).
pub fn effective_waist(theta_p: f64, phi_p: f64, rho: f64) -> Result<f64, FluxError> {
    Ok(rho / transverse_fraction(theta_p, phi_p)?.sqrt())
}

/// Per-pulse probability at the point of closest approach to the beam axis,
/// P̃⁰ = P⁰ exp(−4 sin²θ′ sin²φ′ / (1 − sin²θ′cos²φ′)).
pub fn peak_prob_on_trajectory(theta_p: f64, phi_p: f64, p0: f64) -> Result<f64, FluxError> {
    let d = transverse_fraction(theta_p, phi_p)?;
    let offset = (theta_p.sin() * phi_p.sin()).powi(2) / d;
    Ok(p0 * (-4.0 * offset).exp())
}

// ζ(3/2 − n)/n!, the Taylor coefficients of Li_{3/2}(e^μ) + 2√(−πμ) about μ = 0.
const LI_SERIES: [f64; 18] = [
    2.612_375_348_685_488,
    -1.460_354_508_809_586_8,
    -0.103_943_112_488_677_28,
    -0.004_247_533_648_305_506,
    3.548_720_324_104_304e-4,
    3.700_842_779_566_193e-5,
    -4.293_985_065_577_547e-6,
    -5.300_511_944_244_493e-7,
    6.812_420_484_962_472e-8,
    9.008_596_705_798_666e-9,
    -1.216_940_275_850_113e-9,
    -1.671_519_835_374_238_6e-10,
    2.326_948_902_455_193e-11,
    3.275_559_753_380_427_5e-12,
    -4.654_251_296_129_394e-13,
    -6.666_434_552_781_358e-14,
    9.615_068_088_964_928e-15,
    1.395_245_321_344_655_6e-15,
];

/// Polylogarithm Li_{3/2}(p) = Σ_k p^k / k^{3/2} for p ∈ [0, 1].
pub(crate) fn polylog_three_halves(p: f64) -> f64 {
    if p <= 0.5 {
        let mut sum = 0.0;
        let mut power = 1.0;
        for k in 1..=64u32 {
            power *= p;
            let term = power / (k as f64).powf(1.5);
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        sum
    } else {
        let mu = p.ln();
        let series = LI_SERIES.iter().rev().fold(0.0, |acc, c| acc * mu + c);
        series - 2.0 * (-PI * mu).sqrt()
    }
}

/// Pulse-train survival complement when pulses are dense (spacing ≪ w):
/// Σ_j ln(1 − p e^{−4ζ_j²/w²}) → (1/vT)∫ dζ ln(1 − p e^{−4ζ²/w²})
///                          = −(w√π / 2vT) Li_{3/2}(p).
pub(crate) fn dense_complement(peak: f64, w: f64, spacing: f64) -> f64 {
    if peak >= 1.0 {
        return 1.0;
    }
    let log_survival = -(w * PI.sqrt() / (2.0 * spacing)) * polylog_three_halves(peak);
    -log_survival.exp_m1()
}

/// Ionization probability accumulated over the whole pulse train,
/// P_net = 1 − Π_j [1 − P̃⁰ exp(−4ζ_j²/w²)] with ζ_j = jvT + ζ₀.
///
/// The product runs over every pulse whose factor differs from 1 by more
/// than 1e-16·P̃⁰ and is accumulated in log space, so it stays exact for
/// P̃⁰ close to 1 and accurate for P̃⁰ ≪ 1.
pub fn p_net_product(traj: &Trajectory, p0: f64, period: f64, rho: f64) -> Result<f64, FluxError> {
    check_probability(p0)?;
    let peak = peak_prob_on_trajectory(traj.theta_p, traj.phi_p, p0)?;
    let w = effective_waist(traj.theta_p, traj.phi_p, rho)?;
    Ok(survival_complement(peak, w, traj.speed * period, traj.zeta0))
}

/// 1 − Π_j [1 − peak·exp(−4(j·spacing + zeta0)²/w²)].
pub(crate) fn survival_complement(peak: f64, w: f64, spacing: f64, zeta0: f64) -> f64 {
    if peak == 0.0 {
        return 0.0;
    }
    let reach = 0.5 * w * CUTOFF_IN_HALF_WAISTS;
    if 2.0 * reach / spacing > DENSE_PULSE_COUNT {
        return dense_complement(peak, w, spacing);
    }
    let j_min = ((-reach - zeta0) / spacing).ceil() as i64;
    let j_max = ((reach - zeta0) / spacing).floor() as i64;
    let inv_w2 = 4.0 / (w * w);
    let mut log_survival = 0.0;
    for j in j_min..=j_max {
        let zeta = j as f64 * spacing + zeta0;
        let p = peak * (-zeta * zeta * inv_w2).exp();
        if p >= 1.0 {
            return 1.0;
        }
        log_survival += (-p).ln_1p();
    }
    -log_survival.exp_m1()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetProbability {
    pub value: f64,
    pub warnings: Vec<Warning>,
}

/// Many-pulse, weak-probability form of [`p_net_product`]:
/// P_net = P̃⁰ √(π/4) w / (vT).
pub fn p_net_integral(traj: &Trajectory, p0: f64, period: f64, rho: f64) -> Result<NetProbability, FluxError> {
    check_probability(p0)?;
    let peak = peak_prob_on_trajectory(traj.theta_p, traj.phi_p, p0)?;
    let w = effective_waist(traj.theta_p, traj.phi_p, rho)?;
    let spacing = traj.speed * period;
    let value = peak * (PI / 4.0).sqrt() * w / spacing;
    let mut warnings = Vec::new();
    if spacing > w / 3.0 {
        warnings.push(Warning::SparsePulses);
    }
    if value > 0.1 {
        warnings.push(Warning::TrajectoryProbabilityLarge);
    }
    Ok(NetProbability { value, warnings })
}
