//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ionload::bloch::{integrate_bloch, matched_cw_ratio, p_ion_focus, p_ion_simplified, p_ion_weak, PulseParams};
use ionload::constants::*;
use ionload::physkit::{
    density_from_pressure, mean_speed, transform_limit, wavelength_to_frequency_width, BeamGeometry, PulsedLaser,
    Species, Vapor,
};
use ionload::scan::{fit_gaussian_fwhm, fit_power_law, parse_config, run_scan};
use ionload::vaporflux::{
    angular_constant, efficiency, flux_analytic, flux_monte_carlo, flux_quadrature, flux_quadrature_exact,
    flux_saturated, loading_rate, LoadingVolume,
};
use ionload::Warning;

type Outcome = Result<(bool, String), ionload::Error>;
type Criterion = (&'static str, fn() -> Outcome, u64);

fn cd_vapor() -> Vapor {
    Vapor::new(3e5 * PER_CUBIC_CENTIMETER, 293.0, Species::cadmium().mass).unwrap()
}

fn cd_p0(energy_pj: f64, tau_ps: f64, waist_um: f64, period: f64) -> f64 {
    let cd = Species::cadmium();
    let pulse = PulsedLaser::new(cd.lambda_sp, energy_pj * PICOJOULE, tau_ps * PICOSECOND, period).unwrap();
    let beam = BeamGeometry::new(waist_um * MICROMETER, 100.0 * MICROMETER).unwrap();
    p_ion_focus(&pulse, &beam, &cd).p0
}

const PERIOD_80MHZ: f64 = 12.5 * NANOSECOND;

fn c1() -> Outcome {
    let p0 = cd_p0(1.0, 1.0, 1.0, PERIOD_80MHZ);
    Ok((
        (0.002..=0.008).contains(&p0),
        format!("P0(1 pJ, 1 ps, 1 um) = {p0:.5e}, want [0.002, 0.008]"),
    ))
}

fn c2() -> Outcome {
    let n = 10_000;
    let worst = (1..=n)
        .map(|i| p_ion_weak(PI * i as f64 / n as f64, 0.01).relative_error.abs())
        .fold(0.0, f64::max);
    Ok((
        (0.15..=0.25).contains(&worst),
        format!("max relative error of theta^2 form = {worst:.5}, want [0.15, 0.25]"),
    ))
}

fn c3() -> Outcome {
    let gamma = Species::cadmium().gamma;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut worst, mut defect) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let theta = rng.gen_range(1.0..PI);
        // g / Gamma = theta / (2x) > 50.
        let x = rng.gen_range(1e-4..theta / 100.0);
        let tau = rng.gen_range(0.1..2.0) * PICOSECOND;
        let period = rng.gen_range(12.5..200.0) * NANOSECOND;
        let ratio = rng.gen_range(0.0..0.1);
        let p = PulseParams::new(theta, x, ratio, gamma, tau, period)?;
        let traj = integrate_bloch(&p, 1, 1e-10)?;
        let ode = traj.first_period_ionization();
        let closed = p_ion_simplified(&p);
        worst = worst.max((closed - ode).abs() / closed.abs().max(ode.abs()).max(1e-9));
        defect = defect.max(traj.max_norm_defect);
    }
    Ok((
        worst < 5e-2 && defect < 1e-9,
        format!("100 draws: max relative error {worst:.3e} (< 5e-2), max norm defect {defect:.1e} (< 1e-9)"),
    ))
}

fn c4a() -> Outcome {
    let a = angular_constant(1e-10)?;
    let rel = a / PI.sqrt() - 1.0;
    Ok((
        rel.abs() < 1e-3,
        format!(
            "angular integral = {a:.10}, sqrt(pi) = {:.10}, relative {rel:+.4e} (|.| < 1e-3)",
            PI.sqrt()
        ),
    ))
}

fn c4b() -> Outcome {
    let vapor = cd_vapor();
    let volume = LoadingVolume::new(25.0 * MICROMETER, 100.0 * MICROMETER)?;
    let p0 = cd_p0(60.0, 1.0, 25.0, PERIOD_80MHZ);
    let quad = flux_quadrature(&vapor, &volume, p0, PERIOD_80MHZ)?.flux;
    let closed = vapor.density * volume.waist * p0 / (8.0 * PERIOD_80MHZ);
    let rel = quad / closed - 1.0;
    Ok((
        rel.abs() < 5e-3,
        format!("quadrature / (n0 rho P0 / 8T) - 1 = {rel:+.4e} (|.| < 5e-3)"),
    ))
}

fn c5() -> Outcome {
    let vapor = cd_vapor();
    let volume = LoadingVolume::new(25.0 * MICROMETER, 100.0 * MICROMETER)?;
    let p0 = cd_p0(60.0, 1.0, 25.0, PERIOD_80MHZ);
    let n = 1_000_000;
    let analytic = flux_analytic(&vapor, &volume, p0, PERIOD_80MHZ)?.flux;
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| flux_monte_carlo(&vapor, &volume, p0, PERIOD_80MHZ, n, 5))
    };
    let one = run(1)?;
    let four = run(4)?;
    let se = one.stderr.unwrap_or(0.0);
    let z = (one.flux - analytic) / se;
    let rel_se = se / one.flux;
    let same = one.flux.to_bits() == four.flux.to_bits() && one.stderr == four.stderr;
    Ok((
        z.abs() <= 3.0 && rel_se < 0.02 && same,
        format!("1e6 samples: (MC - analytic) = {z:+.2} stderr (|.| <= 3), relative stderr {rel_se:.2e} (< 2e-2), 1 vs 4 threads identical: {same}"),
    ))
}

fn c6() -> Outcome {
    let vapor = cd_vapor();
    let volume = LoadingVolume::new(25.0 * MICROMETER, 100.0 * MICROMETER)?;
    let r1 = loading_rate(&vapor, &volume, cd_p0(60.0, 1.0, 25.0, PERIOD_80MHZ), PERIOD_80MHZ)?;
    let r01 = loading_rate(&vapor, &volume, cd_p0(60.0, 0.1, 25.0, PERIOD_80MHZ), PERIOD_80MHZ)?;
    Ok((
        (20.0..=80.0).contains(&r1) && (2.0..=8.0).contains(&r01),
        format!("R(1 ps) = {r1:.2} s^-1 (want [20, 80]), R(0.1 ps) = {r01:.3} s^-1 (want [2, 8])"),
    ))
}

fn c7() -> Outcome {
    let vapor = cd_vapor();
    let volume = LoadingVolume::new(10.0 * MICROMETER, 100.0 * MICROMETER)?;
    let e60 = efficiency(&volume, cd_p0(60.0, 1.0, 10.0, PERIOD_80MHZ), &vapor, PERIOD_80MHZ)?;
    let e300 = efficiency(&volume, cd_p0(300.0, 1.0, 10.0, PERIOD_80MHZ), &vapor, PERIOD_80MHZ)?;
    let flagged = e300
        .warnings
        .iter()
        .any(|w| matches!(w, Warning::WeakRegimeViolated | Warning::EfficiencyClamped));
    Ok((
        (0.002..=0.008).contains(&e60.value) && flagged,
        format!(
            "eta(60 pJ) = {:.4}% (want [0.2, 0.8]%), eta(300 pJ) = {:.2}% with warnings [{}]",
            100.0 * e60.value,
            100.0 * e300.value,
            ionload::warning::join_codes(&e300.warnings)
        ),
    ))
}

fn c8() -> Outcome {
    let v = mean_speed(&cd_vapor());
    let n0 = density_from_pressure(1e-11 * TORR, 293.0) / PER_CUBIC_CENTIMETER;
    let vt = v * PERIOD_80MHZ / MICROMETER;
    Ok((
        (v - 240.0).abs() <= 8.0 && (n0 / 3e5 - 1.0).abs() <= 0.15 && (vt - 3.0).abs() <= 0.3,
        format!("vbar = {v:.2} m/s (240 +- 8), n0 = {n0:.4e} cm^-3 (3e5 +- 15%), vbar T = {vt:.3} um (3 +- 0.3)"),
    ))
}

fn c9() -> Outcome {
    let c = parse_config(
        "scan.axis = pulse_energy\nscan.min = 5 pJ\nscan.max = 100 pJ\nscan.points = 20\nscan.spacing = log",
    )?;
    let rows = run_scan(&c)?;
    let x: Vec<f64> = rows.iter().map(|r| r.axis_value).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.rate).collect();
    let fit = fit_power_law(&x, &y)?;
    Ok((
        (fit.exponent - 2.0).abs() <= 0.01,
        format!("log-log slope = {:.6} (2 +- 0.01)", fit.exponent),
    ))
}

fn c10() -> Outcome {
    let tau = 1.1 * PICOSECOND;
    let c = parse_config(
        "laser.duration = 1.1 ps\nscan.axis = detuning\nscan.min = -1000 GHz\nscan.max = 1000 GHz\nscan.points = 81",
    )?;
    let rows = run_scan(&c)?;
    let x: Vec<f64> = rows.iter().map(|r| r.axis_value).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.rate).collect();
    let fit = fit_gaussian_fwhm(&x, &y)?;
    let expected = transform_limit(tau) / GIGAHERTZ;
    let rel = fit.fwhm / expected - 1.0;
    Ok((
        rel.abs() <= 0.1,
        format!(
            "FWHM = {:.1} GHz vs 0.441/tau = {expected:.1} GHz ({:+.2}%, within 10%)",
            fit.fwhm,
            100.0 * rel
        ),
    ))
}

fn c11() -> Outcome {
    let cd = Species::cadmium();
    let p = PulseParams::new(1.0, 0.01, 0.0, cd.gamma, PICOSECOND, PERIOD_80MHZ)?;
    let r = matched_cw_ratio(&p, 10_000).ratio;
    Ok((
        (r - 3.0).abs() <= 0.75,
        format!("pulsed / cw at matched average intensity = {r:.4} (3 +- 0.75)"),
    ))
}

fn c12() -> Outcome {
    let mass = Species::cadmium().mass;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut above, mut disagree, mut worst_z) = (0, 0, 0.0f64);
    let mut min_p0 = f64::INFINITY;
    let mut max_p0 = 0.0f64;
    for i in 0..50u64 {
        let log = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| (lo.ln() + rng.gen::<f64>() * (hi / lo).ln()).exp();
        let vapor = Vapor::new(
            log(&mut rng, 1e4, 1e7) * PER_CUBIC_CENTIMETER,
            rng.gen_range(250.0..600.0),
            mass,
        )?;
        let waist = rng.gen_range(10.0..50.0) * MICROMETER;
        let volume = LoadingVolume::new(waist, rng.gen_range(2.0..20.0) * waist)?;
        let period = log(&mut rng, 5.0, 50.0) * NANOSECOND;
        let p0 = log(&mut rng, 1e-5, 1.0);
        min_p0 = min_p0.min(p0);
        max_p0 = max_p0.max(p0);
        let cap = flux_saturated(&vapor);
        let exact = flux_quadrature_exact(&vapor, &volume, p0, period, 1e-4)?.flux;
        let mc = flux_monte_carlo(&vapor, &volume, p0, period, 100_000, 100 + i)?;
        let se = mc.stderr.unwrap_or(0.0);
        if exact > cap || mc.flux > cap {
            above += 1;
        }
        let z = (mc.flux - exact) / se;
        worst_z = worst_z.max(z.abs());
        if z.abs() > 3.0 {
            disagree += 1;
        }
    }
    Ok((
        above == 0 && disagree == 0,
        format!(
            "50 draws, P0 in [{min_p0:.1e}, {max_p0:.2}]: {above} above n0 vbar/4, {disagree} with |MC - quadrature| > 3 stderr (worst {worst_z:.2})"
        ),
    ))
}

fn c13() -> Outcome {
    let tau = transform_limit(wavelength_to_frequency_width(6.0 * NANOMETER, 915.0 * NANOMETER)) / FEMTOSECOND;
    Ok((
        (tau - 205.0).abs() <= 15.0,
        format!("6 nm at 915 nm -> tau = {tau:.1} fs (205 +- 15)"),
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 14] = [
        ("1", c1, 1),
        ("2", c2, 1),
        ("3", c3, 30),
        ("4a", c4a, 10),
        ("4b", c4b, 10),
        ("5", c5, 120),
        ("6", c6, 1),
        ("7", c7, 1),
        ("8", c8, 1),
        ("9", c9, 1),
        ("10", c10, 5),
        ("11", c11, 1),
        ("12", c12, 120),
        ("13", c13, 1),
    ];
    let mut failed = 0;
    for (id, check, budget) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget);
        let (ok, detail) = match outcome {
            Ok((ok, detail)) => (ok && in_time, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {id:>2}: {detail} [{:.2} s of {budget} s]",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
