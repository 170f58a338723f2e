//! Single-point evaluation and axis scans.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::bloch::{p_ion_focus, spectral_weight, PulseParams};
use crate::physkit::{rabi_angle, BeamGeometry, PulsedLaser};
use crate::vaporflux::{
    flux_analytic, flux_monte_carlo, flux_quadrature_exact, flux_saturated, FluxResult, LoadingVolume, Method,
};
use crate::warning::Warning;
use crate::Error;

use super::config::{AxisKind, PointConfig, ScanConfig, Setup};

/// Relative tolerance of the cap-aware quadrature used by scans.
pub const QUADRATURE_REL: f64 = 1e-6;

/// One evaluated operating point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    /// Per-pulse probability at the focus, after any spectral weighting.
    pub p0: f64,
    pub result: FluxResult,
}

/// Evaluates `point` with P⁰ scaled by `weight` (1 on resonance).
pub fn evaluate_weighted(point: &PointConfig, weight: f64) -> Result<Evaluation, Error> {
    let Setup {
        species,
        pulse,
        cw,
        beam,
        vapor,
    } = &point.setup;
    let period = pulse.period;
    let p0 = p_ion_focus(pulse, beam, species).p0 * weight;
    let theta = rabi_angle(pulse, beam, species) * weight.sqrt();

    let mut warnings = beam.warnings(pulse.lambda_center);
    warnings.extend(PulseParams::from_lasers(pulse, beam, species, cw.as_ref()).warnings());
    if p0 > 0.1 {
        warnings.push(Warning::FocusProbabilityLarge);
    }
    if theta > PI {
        warnings.push(Warning::RabiAngleLarge);
    }

    let volume = LoadingVolume::from(*beam);
    let p_used = p0.min(1.0);
    let mut result = match point.method {
        Method::Analytic => {
            let mut r = flux_analytic(vapor, &volume, p_used, period)?;
            let cap = flux_saturated(vapor);
            if r.flux > cap {
                r.flux = cap;
                r.rate = cap * volume.surface_area();
                r.efficiency = 1.0;
                r.warnings.push(Warning::SaturatedFluxCap);
            }
            r
        }
        Method::Quadrature => flux_quadrature_exact(vapor, &volume, p_used, period, QUADRATURE_REL)?,
        Method::MonteCarlo => {
            let mc = point.mc.ok_or(crate::scan::ConfigError::Missing("mc.seed"))?;
            flux_monte_carlo(vapor, &volume, p_used, period, mc.samples, mc.seed)?
        }
    };
    warnings.append(&mut result.warnings);
    warnings.sort_unstable();
    warnings.dedup();
    result.warnings = warnings;
    Ok(Evaluation { p0, result })
}

pub fn evaluate(point: &PointConfig) -> Result<Evaluation, Error> {
    evaluate_weighted(point, 1.0)
}

/// One line of scan output. The axis value is in the axis display unit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub axis_value: f64,
    pub p0: f64,
    /// m⁻² s⁻¹.
    pub flux: f64,
    /// s⁻¹.
    pub rate: f64,
    pub efficiency: f64,
    pub stderr: Option<f64>,
    pub warnings: Vec<Warning>,
}

fn with_axis(point: &PointConfig, kind: AxisKind, value: f64) -> Result<(PointConfig, f64), Error> {
    let mut p = point.clone();
    let s = &mut p.setup;
    let mut weight = 1.0;
    match kind {
        AxisKind::Detuning => weight = spectral_weight(value, s.pulse.duration),
        AxisKind::PulseEnergy => {
            s.pulse = PulsedLaser::new(s.pulse.lambda_center, value, s.pulse.duration, s.pulse.period)?
        }
        AxisKind::Duration => s.pulse = PulsedLaser::new(s.pulse.lambda_center, s.pulse.energy, value, s.pulse.period)?,
        AxisKind::Waist => s.beam = BeamGeometry::new(value, s.beam.overlap_length)?,
        AxisKind::OverlapLength => s.beam = BeamGeometry::new(s.beam.waist, value)?,
        AxisKind::Density => s.vapor = s.vapor.with_density(value)?,
    }
    Ok((p, weight))
}

/// Evaluates every axis point. Points run in parallel; rows come back in
/// axis order.
pub fn run_scan(config: &ScanConfig) -> Result<Vec<ScanRow>, Error> {
    let kind = config.axis.kind;
    let (_, display) = kind.display_unit();
    config
        .axis
        .values()
        .into_par_iter()
        .map(|value| {
            let (point, weight) = with_axis(&config.point, kind, value)?;
            let Evaluation { p0, result } = evaluate_weighted(&point, weight)?;
            Ok(ScanRow {
                axis_value: value / display,
                p0,
                flux: result.flux,
                rate: result.rate,
                efficiency: result.efficiency,
                stderr: result.stderr,
                warnings: result.warnings,
            })
        })
        .collect()
}
