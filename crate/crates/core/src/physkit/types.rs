use serde::Serialize;

use crate::constants::{SPEED_OF_LIGHT, SQ_CENTIMETER};
use crate::warning::Warning;

use super::ParamError;

fn require(cond: bool, field: &'static str, reason: &str) -> Result<(), ParamError> {
    if cond {
        Ok(())
    } else {
        Err(ParamError::Invalid {
            field,
            reason: reason.to_string(),
        })
    }
}

fn finite(x: f64) -> bool {
    x.is_finite()
}

/// An atomic species with a ¹S₀ → ¹P₁ resonance used as the intermediate step
/// of two-photon ionization. All fields are SI.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Species {
    pub name: String,
    /// ¹S₀ → ¹P₁ wavelength (m).
    pub lambda_sp: f64,
    /// Ground state to continuum threshold wavelength (m).
    pub lambda_ion: f64,
    /// ¹P₁ radiative linewidth (rad/s).
    pub gamma: f64,
    /// ¹P₁ photoionization cross section (m²).
    pub sigma_pi: f64,
    /// Atomic mass (kg).
    pub mass: f64,
}

impl Species {
    pub fn new(
        name: impl Into<String>,
        lambda_sp: f64,
        lambda_ion: f64,
        gamma: f64,
        sigma_pi: f64,
        mass: f64,
    ) -> Result<Self, ParamError> {
        require(finite(lambda_ion) && lambda_ion > 0.0, "lambda_ion", "must be > 0")?;
        require(
            finite(lambda_sp) && lambda_sp > lambda_ion,
            "lambda_sp",
            "must exceed the ionization threshold wavelength",
        )?;
        require(finite(gamma) && gamma > 0.0, "gamma", "must be > 0")?;
        require(finite(sigma_pi) && sigma_pi > 0.0, "sigma_pi", "must be > 0")?;
        require(finite(mass) && mass > 0.0, "mass", "must be > 0")?;
        Ok(Species {
            name: name.into(),
            lambda_sp,
            lambda_ion,
            gamma,
            sigma_pi,
            mass,
        })
    }

    /// Cadmium with linewidth γ/2π = 91 MHz and σ = 10⁻¹⁶ cm².
    pub fn cadmium() -> Self {
        super::presets::species_preset("cd")
            .and_then(|p| p.to_species(1e-16 * SQ_CENTIMETER).ok())
            .expect("cadmium preset is complete")
    }

    /// Whether the ¹P₁ level lies at or above half the ionization energy,
    /// so a single laser can both excite and ionize.
    pub fn two_photon_feasible(&self) -> bool {
        self.lambda_sp <= 2.0 * self.lambda_ion
    }

    /// Angular frequency of the resonance (rad/s).
    pub fn omega(&self) -> f64 {
        2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / self.lambda_sp
    }
}

/// A train of square pulses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PulsedLaser {
    /// Central wavelength (m).
    pub lambda_center: f64,
    /// Pulse energy (J).
    pub energy: f64,
    /// Pulse duration τ (s).
    pub duration: f64,
    /// Repetition period T (s).
    pub period: f64,
}

impl PulsedLaser {
    pub fn new(lambda_center: f64, energy: f64, duration: f64, period: f64) -> Result<Self, ParamError> {
        require(
            finite(lambda_center) && lambda_center > 0.0,
            "lambda_center",
            "must be > 0",
        )?;
        require(finite(energy) && energy >= 0.0, "energy", "must be >= 0")?;
        require(finite(duration) && duration > 0.0, "duration", "must be > 0")?;
        require(
            finite(period) && period > duration,
            "period",
            "must exceed the pulse duration",
        )?;
        Ok(PulsedLaser {
            lambda_center,
            energy,
            duration,
            period,
        })
    }

    pub fn omega(&self) -> f64 {
        2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / self.lambda_center
    }

    pub fn rep_rate(&self) -> f64 {
        1.0 / self.period
    }

    /// Time-averaged intensity for a given peak intensity, I τ / T.
    pub fn average_intensity(&self, peak: f64) -> f64 {
        peak * self.duration / self.period
    }
}

/// A continuous-wave laser that can ionize from the ¹P₁ level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CwLaser {
    /// Intensity (W/m²).
    pub intensity: f64,
    /// Wavelength (m).
    pub lambda: f64,
    /// ¹P₁ photoionization cross section at this wavelength (m²).
    pub sigma_cw: f64,
}

impl CwLaser {
    pub fn new(intensity: f64, lambda: f64, sigma_cw: f64) -> Result<Self, ParamError> {
        require(finite(intensity) && intensity >= 0.0, "intensity", "must be >= 0")?;
        require(finite(lambda) && lambda > 0.0, "lambda", "must be > 0")?;
        require(finite(sigma_cw) && sigma_cw >= 0.0, "sigma_cw", "must be >= 0")?;
        Ok(CwLaser {
            intensity,
            lambda,
            sigma_cw,
        })
    }

    /// Ionization rate Γ_cw from the ¹P₁ level (s⁻¹).
    pub fn ionization_rate(&self) -> f64 {
        super::ionization_rate(self.intensity, self.sigma_cw, self.lambda)
    }
}

/// Gaussian beam focus and its overlap with the trap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BeamGeometry {
    /// Waist ρ, the 1/e radius of the electric field (m).
    pub waist: f64,
    /// Trap extent L along the beam (m).
    pub overlap_length: f64,
}

impl BeamGeometry {
    pub fn new(waist: f64, overlap_length: f64) -> Result<Self, ParamError> {
        require(finite(waist) && waist > 0.0, "waist", "must be > 0")?;
        require(
            finite(overlap_length) && overlap_length > 0.0,
            "overlap_length",
            "must be > 0",
        )?;
        Ok(BeamGeometry { waist, overlap_length })
    }

    pub fn rayleigh_range(&self, lambda: f64) -> f64 {
        std::f64::consts::PI * self.waist * self.waist / lambda
    }

    pub fn warnings(&self, lambda: f64) -> Vec<Warning> {
        let mut out = Vec::new();
        if self.rayleigh_range(lambda) < 5.0 * self.overlap_length {
            out.push(Warning::RayleighRangeShort);
        }
        if self.overlap_length < 5.0 * self.waist {
            out.push(Warning::LoadingVolumeStubby);
        }
        out
    }
}

/// Uniform thermal vapor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Vapor {
    /// Number density n₀ (m⁻³).
    pub density: f64,
    /// Temperature (K).
    pub temperature: f64,
    /// Atomic mass (kg).
    pub mass: f64,
}

impl Vapor {
    pub fn new(density: f64, temperature: f64, mass: f64) -> Result<Self, ParamError> {
        require(finite(density) && density >= 0.0, "density", "must be >= 0")?;
        require(finite(temperature) && temperature > 0.0, "temperature", "must be > 0")?;
        require(finite(mass) && mass > 0.0, "mass", "must be > 0")?;
        Ok(Vapor {
            density,
            temperature,
            mass,
        })
    }

    /// Ideal-gas vapor at partial pressure `pressure` (Pa).
    pub fn from_pressure(pressure: f64, temperature: f64, mass: f64) -> Result<Self, ParamError> {
        require(finite(pressure) && pressure >= 0.0, "pressure", "must be >= 0")?;
        require(finite(temperature) && temperature > 0.0, "temperature", "must be > 0")?;
        Vapor::new(super::density_from_pressure(pressure, temperature), temperature, mass)
    }

    pub fn mean_speed(&self) -> f64 {
        super::mean_speed(self)
    }

    pub fn with_density(self, density: f64) -> Result<Self, ParamError> {
        Vapor::new(density, self.temperature, self.mass)
    }
}

/// Closed interval carried over from a printed table; single values are
/// stored with `min == max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Span {
    pub min: f64,
    pub max: f64,
}

impl Span {
    pub const fn new(min: f64, max: f64) -> Self {
        Span { min, max }
    }

    pub const fn single(v: f64) -> Self {
        Span { min: v, max: v }
    }

    pub fn is_single(&self) -> bool {
        self.min == self.max
    }

    pub fn scaled(&self, k: f64) -> Span {
        Span::new(self.min * k, self.max * k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TrapKind {
    Quadrupole,
    Linear,
}

/// Published characteristics of an rf trap. Secular frequencies are data only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrapPreset {
    pub key: &'static str,
    pub name: &'static str,
    pub kind: TrapKind,
    /// Trap depth (J).
    pub depth: Span,
    /// Linear size L along the photoionizing beam (m).
    pub size_l: Span,
    /// rf drive frequency (Hz).
    pub rf_drive: f64,
    /// Secular frequencies ν_x, ν_y, ν_z (Hz).
    pub secular: [Span; 3],
}

impl TrapPreset {
    /// L used when the preset supplies the overlap length. For a range this is
    /// the smallest trapping dimension.
    pub fn nominal_length(&self) -> f64 {
        self.size_l.min
    }
}
