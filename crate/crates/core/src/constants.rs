//! CODATA 2018 physical constants and unit conversion factors.
//!
//! Everything inside the crate is SI. The factors below convert a value
//! expressed in the named unit into SI, e.g. `60.0 * PICOJOULE` is in J.

use std::f64::consts::PI;

/// Planck constant (J s), exact.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant (J s).
pub const HBAR: f64 = PLANCK / (2.0 * PI);
/// Speed of light in vacuum (m/s), exact.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Boltzmann constant (J/K), exact.
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Atomic mass constant (kg).
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;
/// Elementary charge (C), exact.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Time-bandwidth product of a transform-limited Gaussian pulse (FWHM x FWHM).
pub const GAUSSIAN_TIME_BANDWIDTH: f64 = 0.441;

pub const PICOJOULE: f64 = 1e-12;
pub const NANOJOULE: f64 = 1e-9;
pub const ELECTRONVOLT: f64 = ELEMENTARY_CHARGE;

pub const FEMTOSECOND: f64 = 1e-15;
pub const PICOSECOND: f64 = 1e-12;
pub const NANOSECOND: f64 = 1e-9;

pub const NANOMETER: f64 = 1e-9;
pub const MICROMETER: f64 = 1e-6;
pub const CENTIMETER: f64 = 1e-2;

pub const SQ_CENTIMETER: f64 = 1e-4;
pub const PER_CUBIC_CENTIMETER: f64 = 1e6;
pub const WATT_PER_SQ_CENTIMETER: f64 = 1e4;

pub const KILOHERTZ: f64 = 1e3;
pub const MEGAHERTZ: f64 = 1e6;
pub const GIGAHERTZ: f64 = 1e9;
pub const TERAHERTZ: f64 = 1e12;

/// 1 torr = 101325/760 Pa.
pub const TORR: f64 = 101_325.0 / 760.0;
pub const MILLIBAR: f64 = 100.0;
