//! Unit tables for the configuration format.

use crate::constants::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Energy,
    Time,
    Frequency,
    Length,
    Area,
    Mass,
    Density,
    Pressure,
    Temperature,
    Intensity,
    Count,
}

impl Dimension {
    pub fn name(self) -> &'static str {
        match self {
            Dimension::Energy => "energy",
            Dimension::Time => "time",
            Dimension::Frequency => "frequency",
            Dimension::Length => "length",
            Dimension::Area => "area",
            Dimension::Mass => "mass",
            Dimension::Density => "number density",
            Dimension::Pressure => "pressure",
            Dimension::Temperature => "temperature",
            Dimension::Intensity => "intensity",
            Dimension::Count => "dimensionless",
        }
    }

    /// Units accepted for this dimension with their SI factors.
    pub fn units(self) -> &'static [(&'static str, f64)] {
        match self {
            Dimension::Energy => &[
                ("J", 1.0),
                ("mJ", 1e-3),
                ("uJ", 1e-6),
                ("µJ", 1e-6),
                ("nJ", NANOJOULE),
                ("pJ", PICOJOULE),
                ("fJ", 1e-15),
                ("eV", ELECTRONVOLT),
            ],
            Dimension::Time => &[
                ("s", 1.0),
                ("ms", 1e-3),
                ("us", 1e-6),
                ("µs", 1e-6),
                ("ns", NANOSECOND),
                ("ps", PICOSECOND),
                ("fs", FEMTOSECOND),
            ],
            Dimension::Frequency => &[
                ("Hz", 1.0),
                ("kHz", KILOHERTZ),
                ("MHz", MEGAHERTZ),
                ("GHz", GIGAHERTZ),
                ("THz", TERAHERTZ),
            ],
            Dimension::Length => &[
                ("m", 1.0),
                ("mm", 1e-3),
                ("cm", CENTIMETER),
                ("um", MICROMETER),
                ("µm", MICROMETER),
                ("μm", MICROMETER),
                ("nm", NANOMETER),
            ],
            Dimension::Area => &[
                ("m2", 1.0),
                ("m^2", 1.0),
                ("cm2", SQ_CENTIMETER),
                ("cm^2", SQ_CENTIMETER),
            ],
            Dimension::Mass => &[("kg", 1.0), ("u", ATOMIC_MASS_UNIT), ("amu", ATOMIC_MASS_UNIT)],
            Dimension::Density => &[
                ("m-3", 1.0),
                ("m^-3", 1.0),
                ("cm-3", PER_CUBIC_CENTIMETER),
                ("cm^-3", PER_CUBIC_CENTIMETER),
            ],
            Dimension::Pressure => &[("Pa", 1.0), ("torr", TORR), ("Torr", TORR), ("mbar", MILLIBAR)],
            Dimension::Temperature => &[("K", 1.0)],
            Dimension::Intensity => &[
                ("W/m2", 1.0),
                ("W/m^2", 1.0),
                ("W/cm2", WATT_PER_SQ_CENTIMETER),
                ("W/cm^2", WATT_PER_SQ_CENTIMETER),
                ("mW/cm2", 1e-3 * WATT_PER_SQ_CENTIMETER),
                ("mW/cm^2", 1e-3 * WATT_PER_SQ_CENTIMETER),
            ],
            Dimension::Count => &[("", 1.0)],
        }
    }

    pub fn factor(self, unit: &str) -> Option<f64> {
        self.units().iter().find(|(u, _)| *u == unit).map(|&(_, f)| f)
    }

    /// Dimension a unit string belongs to, if any.
    pub fn of_unit(unit: &str) -> Option<Dimension> {
        ALL.iter().copied().find(|d| d.factor(unit).is_some())
    }
}

const ALL: [Dimension; 11] = [
    Dimension::Energy,
    Dimension::Time,
    Dimension::Frequency,
    Dimension::Length,
    Dimension::Area,
    Dimension::Mass,
    Dimension::Density,
    Dimension::Pressure,
    Dimension::Temperature,
    Dimension::Intensity,
    Dimension::Count,
];
