//! The line-oriented configuration format.
//!
//! ```text
//! # comment
//! species.preset = cd
//! laser.energy   = 60 pJ
//! laser.duration = 1 ps
//! laser.rep_rate = 80 MHz
//! beam.waist     = 25 um
//! trap.preset    = ring_fork
//! vapor.pressure = 1e-11 torr
//! scan.axis      = pulse_energy
//! scan.min       = 5 pJ
//! scan.max       = 60 pJ
//! scan.points    = 12
//! ```
//!
//! One `section.key = value [unit]` per line. Every key is optional except the
//! scan block (for scans) and `mc.seed` (for Monte Carlo); omitted values fall
//! back to the cadmium defaults listed in [`KEYS`].

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::constants::*;
use crate::physkit::{species_preset, trap_preset, BeamGeometry, CwLaser, ParamError, PulsedLaser, Species, Vapor};
use crate::vaporflux::Method;

use super::units::Dimension;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: `{key}` already set on line {first}")]
    DuplicateKey { line: usize, key: String, first: usize },
    #[error("line {line}: `{key}` expects {expected}, got unit `{unit}`")]
    UnitMismatch {
        line: usize,
        key: String,
        unit: String,
        expected: &'static str,
    },
    #[error("line {line}: `{key}`: {message}")]
    BadValue { line: usize, key: String, message: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("`{0}` and `{1}` cannot both be set")]
    Conflict(&'static str, &'static str),
    #[error(transparent)]
    Param(#[from] ParamError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueKind {
    Quantity(Dimension),
    Text,
    Integer,
}

/// Every accepted key, its value kind and its default.
pub const KEYS: &[(&str, ValueKind, &str)] = &[
    ("species.preset", ValueKind::Text, "cd"),
    ("species.name", ValueKind::Text, "preset name"),
    ("species.lambda_sp", ValueKind::Quantity(Dimension::Length), "preset"),
    ("species.lambda_ion", ValueKind::Quantity(Dimension::Length), "preset"),
    (
        "species.linewidth",
        ValueKind::Quantity(Dimension::Frequency),
        "preset (γ/2π)",
    ),
    ("species.sigma", ValueKind::Quantity(Dimension::Area), "1e-16 cm2"),
    ("species.mass", ValueKind::Quantity(Dimension::Mass), "preset"),
    ("laser.energy", ValueKind::Quantity(Dimension::Energy), "60 pJ"),
    ("laser.duration", ValueKind::Quantity(Dimension::Time), "1 ps"),
    ("laser.period", ValueKind::Quantity(Dimension::Time), "12.5 ns"),
    ("laser.rep_rate", ValueKind::Quantity(Dimension::Frequency), "80 MHz"),
    (
        "laser.wavelength",
        ValueKind::Quantity(Dimension::Length),
        "species.lambda_sp",
    ),
    ("cw.intensity", ValueKind::Quantity(Dimension::Intensity), "none"),
    (
        "cw.wavelength",
        ValueKind::Quantity(Dimension::Length),
        "required with cw.intensity",
    ),
    ("cw.sigma", ValueKind::Quantity(Dimension::Area), "species.sigma"),
    ("beam.waist", ValueKind::Quantity(Dimension::Length), "25 um"),
    ("beam.length", ValueKind::Quantity(Dimension::Length), "100 um"),
    ("trap.preset", ValueKind::Text, "none"),
    ("trap.length", ValueKind::Quantity(Dimension::Length), "none"),
    ("vapor.density", ValueKind::Quantity(Dimension::Density), "3e5 cm-3"),
    ("vapor.pressure", ValueKind::Quantity(Dimension::Pressure), "none"),
    (
        "vapor.temperature",
        ValueKind::Quantity(Dimension::Temperature),
        "293 K",
    ),
    ("scan.axis", ValueKind::Text, "required for scans"),
    ("scan.min", ValueKind::Quantity(Dimension::Count), "required for scans"),
    ("scan.max", ValueKind::Quantity(Dimension::Count), "required for scans"),
    ("scan.points", ValueKind::Integer, "required for scans"),
    ("scan.spacing", ValueKind::Text, "linear"),
    ("run.method", ValueKind::Text, "analytic"),
    ("mc.samples", ValueKind::Integer, "100000"),
    ("mc.seed", ValueKind::Integer, "required for monte_carlo"),
];

fn kind_of(key: &str) -> Option<ValueKind> {
    KEYS.iter().find(|(k, _, _)| *k == key).map(|&(_, kind, _)| kind)
}

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    line: usize,
    number: Option<f64>,
    unit: String,
    text: String,
}

/// Raw `key = value` pairs with their line numbers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    entries: BTreeMap<String, Entry>,
}

impl Settings {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries: BTreeMap<String, Entry> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                message: format!("expected `section.key = value`, got `{content}`"),
            })?;
            let key = key.trim();
            let value = value.trim();
            if kind_of(key).is_none() {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                });
            }
            if value.is_empty() {
                return Err(ConfigError::Syntax {
                    line,
                    message: format!("`{key}` has no value"),
                });
            }
            if let Some(prev) = entries.get(key) {
                return Err(ConfigError::DuplicateKey {
                    line,
                    key: key.to_string(),
                    first: prev.line,
                });
            }
            let mut parts = value.splitn(2, char::is_whitespace);
            let head = parts.next().unwrap_or("");
            let number = head.parse::<f64>().ok();
            let unit = parts.next().unwrap_or("").trim().to_string();
            entries.insert(
                key.to_string(),
                Entry {
                    line,
                    number,
                    unit,
                    text: value.to_string(),
                },
            );
        }
        Ok(Settings { entries })
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    fn text(&self, key: &'static str) -> Option<(usize, &str)> {
        self.entries.get(key).map(|e| (e.line, e.text.as_str()))
    }

    fn number(&self, key: &str, e: &Entry) -> Result<f64, ConfigError> {
        match e.number {
            Some(v) if v.is_finite() => Ok(v),
            _ => Err(ConfigError::BadValue {
                line: e.line,
                key: key.to_string(),
                message: format!("`{}` is not a number", e.text),
            }),
        }
    }

    /// Value converted to SI using the dimension registered for `key`.
    fn quantity(&self, key: &'static str) -> Result<Option<f64>, ConfigError> {
        let Some(ValueKind::Quantity(dim)) = kind_of(key) else {
            unreachable!("{key} is not a quantity key");
        };
        self.quantity_as(key, dim)
    }

    fn quantity_as(&self, key: &str, dim: Dimension) -> Result<Option<f64>, ConfigError> {
        let Some(e) = self.entries.get(key) else {
            return Ok(None);
        };
        let v = self.number(key, e)?;
        let factor = dim.factor(&e.unit).ok_or_else(|| ConfigError::UnitMismatch {
            line: e.line,
            key: key.to_string(),
            unit: e.unit.clone(),
            expected: dim.name(),
        })?;
        Ok(Some(v * factor))
    }

    fn integer(&self, key: &'static str) -> Result<Option<u64>, ConfigError> {
        let Some(e) = self.entries.get(key) else {
            return Ok(None);
        };
        e.text
            .replace('_', "")
            .parse::<u64>()
            .or_else(|_| {
                // Accept integral floats such as 1e6.
                match e.text.parse::<f64>() {
                    Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < 1.8e19 => Ok(v as u64),
                    _ => Err(()),
                }
            })
            .map(Some)
            .map_err(|_| ConfigError::BadValue {
                line: e.line,
                key: key.to_string(),
                message: format!("`{}` is not a non-negative integer", e.text),
            })
    }

    fn bad(&self, key: &'static str, message: impl Into<String>) -> ConfigError {
        ConfigError::BadValue {
            line: self.entries.get(key).map_or(0, |e| e.line),
            key: key.to_string(),
            message: message.into(),
        }
    }
}

/// The physical system at one operating point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Setup {
    pub species: Species,
    pub pulse: PulsedLaser,
    pub cw: Option<CwLaser>,
    pub beam: BeamGeometry,
    pub vapor: Vapor,
}

impl Default for Setup {
    /// Cadmium, 60 pJ / 1 ps / 80 MHz at 228.9 nm, ρ = 25 µm, L = 100 µm,
    /// n₀ = 3×10⁵ cm⁻³ at 293 K.
    fn default() -> Self {
        let species = Species::cadmium();
        Setup {
            pulse: PulsedLaser::new(species.lambda_sp, 60.0 * PICOJOULE, PICOSECOND, 12.5 * NANOSECOND)
                .expect("default pulse is valid"),
            cw: None,
            beam: BeamGeometry::new(25.0 * MICROMETER, 100.0 * MICROMETER).expect("default beam is valid"),
            vapor: Vapor::new(3e5 * PER_CUBIC_CENTIMETER, 293.0, species.mass).expect("default vapor is valid"),
            species,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct McSettings {
    pub samples: usize,
    pub seed: u64,
}

/// A single operating point plus the evaluation method.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointConfig {
    pub setup: Setup,
    pub method: Method,
    pub mc: Option<McSettings>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisKind {
    Detuning,
    PulseEnergy,
    Waist,
    OverlapLength,
    Duration,
    Density,
}

impl AxisKind {
    pub const ALL: [AxisKind; 6] = [
        AxisKind::Detuning,
        AxisKind::PulseEnergy,
        AxisKind::Waist,
        AxisKind::OverlapLength,
        AxisKind::Duration,
        AxisKind::Density,
    ];

    pub fn key(self) -> &'static str {
        match self {
            AxisKind::Detuning => "detuning",
            AxisKind::PulseEnergy => "pulse_energy",
            AxisKind::Waist => "waist",
            AxisKind::OverlapLength => "overlap_length",
            AxisKind::Duration => "duration",
            AxisKind::Density => "density",
        }
    }

    pub fn dimension(self) -> Dimension {
        match self {
            AxisKind::Detuning => Dimension::Frequency,
            AxisKind::PulseEnergy => Dimension::Energy,
            AxisKind::Waist | AxisKind::OverlapLength => Dimension::Length,
            AxisKind::Duration => Dimension::Time,
            AxisKind::Density => Dimension::Density,
        }
    }

    /// Unit used for this axis in output, with its SI factor.
    pub fn display_unit(self) -> (&'static str, f64) {
        match self {
            AxisKind::Detuning => ("GHz", GIGAHERTZ),
            AxisKind::PulseEnergy => ("pJ", PICOJOULE),
            AxisKind::Waist | AxisKind::OverlapLength => ("um", MICROMETER),
            AxisKind::Duration => ("ps", PICOSECOND),
            AxisKind::Density => ("per_cm3", PER_CUBIC_CENTIMETER),
        }
    }

    /// CSV column name, e.g. `detuning_GHz`.
    pub fn column(self) -> String {
        format!("{}_{}", self.key(), self.display_unit().0)
    }

    pub fn parse(s: &str) -> Option<AxisKind> {
        AxisKind::ALL.into_iter().find(|a| a.key() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Log,
}

/// Axis values are SI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanAxis {
    pub kind: AxisKind,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl ScanAxis {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                let f = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.min + f * (self.max - self.min),
                    Spacing::Log => self.min * (self.max / self.min).powf(f),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanConfig {
    pub point: PointConfig,
    pub axis: ScanAxis,
}

fn exclusive(s: &Settings, a: &'static str, b: &'static str) -> Result<(), ConfigError> {
    if s.contains(a) && s.contains(b) {
        Err(ConfigError::Conflict(a, b))
    } else {
        Ok(())
    }
}

fn build_species(s: &Settings) -> Result<Species, ConfigError> {
    let preset_key = s.text("species.preset").map_or("cd", |(_, t)| t);
    let preset = species_preset(preset_key)
        .ok_or_else(|| s.bad("species.preset", format!("no species preset `{preset_key}`")))?;
    let gamma = match s.quantity("species.linewidth")? {
        Some(f) => 2.0 * std::f64::consts::PI * f,
        None => preset.gamma.ok_or_else(|| ConfigError::BadValue {
            line: s.text("species.preset").map_or(0, |(l, _)| l),
            key: "species.linewidth".into(),
            message: format!("no tabulated linewidth for {}; set species.linewidth", preset.name),
        })?,
    };
    let name = s.text("species.name").map_or(preset.name, |(_, t)| t);
    Ok(Species::new(
        name,
        s.quantity("species.lambda_sp")?.unwrap_or(preset.lambda_sp),
        s.quantity("species.lambda_ion")?.unwrap_or(preset.lambda_ion),
        gamma,
        s.quantity("species.sigma")?.unwrap_or(1e-16 * SQ_CENTIMETER),
        s.quantity("species.mass")?.unwrap_or(preset.mass),
    )?)
}

fn build_setup(s: &Settings) -> Result<Setup, ConfigError> {
    let species = build_species(s)?;

    exclusive(s, "laser.period", "laser.rep_rate")?;
    let period = match (s.quantity("laser.period")?, s.quantity("laser.rep_rate")?) {
        (Some(t), _) => t,
        (None, Some(f)) if f > 0.0 => 1.0 / f,
        (None, Some(_)) => return Err(s.bad("laser.rep_rate", "must be > 0")),
        (None, None) => 12.5 * NANOSECOND,
    };
    let pulse = PulsedLaser::new(
        s.quantity("laser.wavelength")?.unwrap_or(species.lambda_sp),
        s.quantity("laser.energy")?.unwrap_or(60.0 * PICOJOULE),
        s.quantity("laser.duration")?.unwrap_or(PICOSECOND),
        period,
    )?;

    let cw = match s.quantity("cw.intensity")? {
        Some(intensity) => {
            let lambda = s
                .quantity("cw.wavelength")?
                .ok_or(ConfigError::Missing("cw.wavelength"))?;
            let sigma = s.quantity("cw.sigma")?.unwrap_or(species.sigma_pi);
            Some(CwLaser::new(intensity, lambda, sigma)?)
        }
        None => {
            if s.contains("cw.wavelength") || s.contains("cw.sigma") {
                return Err(ConfigError::Missing("cw.intensity"));
            }
            None
        }
    };

    let sources = ["beam.length", "trap.length", "trap.preset"];
    let given: Vec<&'static str> = sources.into_iter().filter(|k| s.contains(k)).collect();
    if given.len() > 1 {
        return Err(ConfigError::Conflict(given[0], given[1]));
    }
    let length = if let Some(l) = s.quantity("beam.length")?.or(s.quantity("trap.length")?) {
        l
    } else if let Some((_, key)) = s.text("trap.preset") {
        trap_preset(key)
            .ok_or_else(|| s.bad("trap.preset", format!("no trap preset `{key}`")))?
            .nominal_length()
    } else {
        100.0 * MICROMETER
    };
    let beam = BeamGeometry::new(s.quantity("beam.waist")?.unwrap_or(25.0 * MICROMETER), length)?;

    exclusive(s, "vapor.density", "vapor.pressure")?;
    let temperature = s.quantity("vapor.temperature")?.unwrap_or(293.0);
    let vapor = match (s.quantity("vapor.density")?, s.quantity("vapor.pressure")?) {
        (_, Some(p)) => Vapor::from_pressure(p, temperature, species.mass)?,
        (d, None) => Vapor::new(d.unwrap_or(3e5 * PER_CUBIC_CENTIMETER), temperature, species.mass)?,
    };

    Ok(Setup {
        species,
        pulse,
        cw,
        beam,
        vapor,
    })
}

fn build_point(s: &Settings) -> Result<PointConfig, ConfigError> {
    let setup = build_setup(s)?;
    let method = match s.text("run.method").map_or("analytic", |(_, t)| t) {
        "analytic" => Method::Analytic,
        "quadrature" => Method::Quadrature,
        "monte_carlo" => Method::MonteCarlo,
        other => {
            return Err(s.bad(
                "run.method",
                format!("`{other}` is not one of analytic, quadrature, monte_carlo"),
            ))
        }
    };
    let mc = if method == Method::MonteCarlo {
        let seed = s.integer("mc.seed")?.ok_or(ConfigError::Missing("mc.seed"))?;
        let samples = s.integer("mc.samples")?.unwrap_or(100_000) as usize;
        if samples < crate::vaporflux::MIN_SAMPLES {
            return Err(s.bad(
                "mc.samples",
                format!("must be at least {}", crate::vaporflux::MIN_SAMPLES),
            ));
        }
        Some(McSettings { samples, seed })
    } else {
        None
    };
    Ok(PointConfig { setup, method, mc })
}

fn build_axis(s: &Settings) -> Result<ScanAxis, ConfigError> {
    let (_, name) = s.text("scan.axis").ok_or(ConfigError::Missing("scan.axis"))?;
    let kind = AxisKind::parse(name).ok_or_else(|| {
        let known: Vec<&str> = AxisKind::ALL.iter().map(|a| a.key()).collect();
        s.bad("scan.axis", format!("`{name}` is not one of {}", known.join(", ")))
    })?;
    let dim = kind.dimension();
    let min = s
        .quantity_as("scan.min", dim)?
        .ok_or(ConfigError::Missing("scan.min"))?;
    let max = s
        .quantity_as("scan.max", dim)?
        .ok_or(ConfigError::Missing("scan.max"))?;
    let points = s.integer("scan.points")?.ok_or(ConfigError::Missing("scan.points"))? as usize;
    let spacing = match s.text("scan.spacing").map_or("linear", |(_, t)| t) {
        "linear" => Spacing::Linear,
        "log" => Spacing::Log,
        other => return Err(s.bad("scan.spacing", format!("`{other}` is not linear or log"))),
    };
    if points < 2 {
        return Err(s.bad("scan.points", "need at least 2 points"));
    }
    if !(min < max) {
        return Err(s.bad("scan.max", "must exceed scan.min"));
    }
    if spacing == Spacing::Log && min <= 0.0 {
        return Err(s.bad("scan.min", "log spacing needs a positive minimum"));
    }
    Ok(ScanAxis {
        kind,
        min,
        max,
        points,
        spacing,
    })
}

/// Parses a configuration that describes a single operating point. Scan keys
/// are accepted and ignored.
pub fn parse_point(text: &str) -> Result<PointConfig, ConfigError> {
    build_point(&Settings::parse(text)?)
}

/// Parses a scan configuration; the scan block is required.
pub fn parse_config(text: &str) -> Result<ScanConfig, ConfigError> {
    let s = Settings::parse(text)?;
    let point = build_point(&s)?;
    let axis = build_axis(&s)?;
    Ok(ScanConfig { point, axis })
}
