//! Curve fits for scan output.

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("x and y have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("point {index} has non-positive or non-finite value {value}")]
    NonPositive { index: usize, value: f64 },
    #[error("fit did not converge after {iterations} iterations: {reason}")]
    NotConverged { iterations: usize, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLaw {
    pub exponent: f64,
    pub prefactor: f64,
    pub r_squared: f64,
}

/// Least-squares fit of y = A·x^k on log-log axes.
pub fn fit_power_law(x: &[f64], y: &[f64]) -> Result<PowerLaw, FitError> {
    if x.len() != y.len() {
        return Err(FitError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 3 {
        return Err(FitError::TooFewPoints {
            needed: 3,
            got: x.len(),
        });
    }
    for (index, &value) in x.iter().chain(y).enumerate() {
        if !(value.is_finite() && value > 0.0) {
            return Err(FitError::NonPositive {
                index: index % x.len(),
                value,
            });
        }
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = ly.iter().map(|b| (b - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(FitError::NotConverged {
            iterations: 0,
            reason: "all x values are equal".into(),
        });
    }
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(PowerLaw {
        exponent,
        prefactor: intercept.exp(),
        r_squared,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianFit {
    pub center: f64,
    pub fwhm: f64,
    pub peak: f64,
    pub iterations: usize,
}

const FWHM_PER_SIGMA: f64 = 2.354_820_045_030_949_4;
const MAX_ITERATIONS: usize = 200;
const PARAM_TOL: f64 = 1e-8;

fn model(p: &Vector3<f64>, x: f64) -> (f64, Vector3<f64>) {
    let (peak, center, sigma) = (p[0], p[1], p[2]);
    let z = (x - center) / sigma;
    let e = (-0.5 * z * z).exp();
    let v = peak * e;
    (v, Vector3::new(e, v * z / sigma, v * z * z / sigma))
}

fn residual_norm(p: &Vector3<f64>, x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(&xi, &yi)| (yi - model(p, xi).0).powi(2)).sum()
}

/// Levenberg–Marquardt fit of y = A exp(−(x − c)²/2σ²), started from the
/// weighted moments of the data. Converges when every parameter step is
/// below 1e-8 relative.
pub fn fit_gaussian_fwhm(x: &[f64], y: &[f64]) -> Result<GaussianFit, FitError> {
    if x.len() != y.len() {
        return Err(FitError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 5 {
        return Err(FitError::TooFewPoints {
            needed: 5,
            got: x.len(),
        });
    }
    let (ymin, ymax) = y.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    if !(ymax - ymin > 1e-12 * ymax.abs()) {
        return Err(FitError::NotConverged {
            iterations: 0,
            reason: "data has no peak".into(),
        });
    }

    let weights: Vec<f64> = y.iter().map(|v| (v - ymin).max(0.0)).collect();
    let total: f64 = weights.iter().sum();
    let mean = x.iter().zip(&weights).map(|(a, w)| a * w).sum::<f64>() / total;
    let var = x.iter().zip(&weights).map(|(a, w)| (a - mean).powi(2) * w).sum::<f64>() / total;
    let mut p = Vector3::new(ymax, mean, var.sqrt().max(f64::MIN_POSITIVE));
    let mut cost = residual_norm(&p, x, y);
    let mut lambda = 1e-3;

    for iteration in 1..=MAX_ITERATIONS {
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        for (&xi, &yi) in x.iter().zip(y) {
            let (v, grad) = model(&p, xi);
            jtj += grad * grad.transpose();
            jtr += grad * (yi - v);
        }
        loop {
            let mut damped = jtj;
            for i in 0..3 {
                damped[(i, i)] += lambda * jtj[(i, i)].max(1e-300);
            }
            let Some(step) = damped.cholesky().map(|c| c.solve(&jtr)) else {
                lambda *= 10.0;
                if lambda > 1e12 {
                    return Err(FitError::NotConverged {
                        iterations: iteration,
                        reason: "normal equations are singular".into(),
                    });
                }
                continue;
            };
            let trial = p + step;
            let trial_cost = residual_norm(&trial, x, y);
            if trial_cost <= cost {
                let small = (0..3).all(|i| step[i].abs() <= PARAM_TOL * (trial[i].abs() + PARAM_TOL));
                p = trial;
                cost = trial_cost;
                lambda = (lambda / 10.0).max(1e-12);
                if small {
                    return Ok(GaussianFit {
                        center: p[1],
                        fwhm: FWHM_PER_SIGMA * p[2].abs(),
                        peak: p[0],
                        iterations: iteration,
                    });
                }
                break;
            }
            lambda *= 10.0;
            if lambda > 1e12 {
                // No downhill step remains: accept if the last step was already tiny.
                let small = (0..3).all(|i| step[i].abs() <= PARAM_TOL * (p[i].abs() + PARAM_TOL));
                if small {
                    return Ok(GaussianFit {
                        center: p[1],
                        fwhm: FWHM_PER_SIGMA * p[2].abs(),
                        peak: p[0],
                        iterations: iteration,
                    });
                }
                return Err(FitError::NotConverged {
                    iterations: iteration,
                    reason: "no decrease in the residual".into(),
                });
            }
        }
    }
    Err(FitError::NotConverged {
        iterations: MAX_ITERATIONS,
        reason: "iteration limit reached".into(),
    })
}
