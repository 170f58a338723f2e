//! Embedded species and trap tables.

use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use crate::constants::{ATOMIC_MASS_UNIT, ELECTRONVOLT, MEGAHERTZ, MICROMETER, NANOMETER};

use super::types::{Span, Species, TrapKind, TrapPreset};
use super::ParamError;

/// A row of the species table: the two wavelengths, the standard atomic
/// weight, and the ¹P₁ linewidth where one is tabulated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpeciesPreset {
    pub key: &'static str,
    pub name: &'static str,
    /// ¹S₀ → ¹P₁ wavelength (m).
    pub lambda_sp: f64,
    /// ¹S₀ → continuum wavelength (m).
    pub lambda_ion: f64,
    /// Atomic mass (kg).
    pub mass: f64,
    /// ¹P₁ linewidth γ (rad/s), when known.
    pub gamma: Option<f64>,
}

impl SpeciesPreset {
    /// Completes the row with a photoionization cross section (m²).
    pub fn to_species(&self, sigma_pi: f64) -> Result<Species, ParamError> {
        let gamma = self.gamma.ok_or(ParamError::Invalid {
            field: "gamma",
            reason: format!("no tabulated linewidth for {}; supply it explicitly", self.name),
        })?;
        Species::new(self.name, self.lambda_sp, self.lambda_ion, gamma, sigma_pi, self.mass)
    }

    pub fn two_photon_feasible(&self) -> bool {
        self.lambda_sp <= 2.0 * self.lambda_ion
    }
}

/// key, symbol, S-P (nm), S-ion (nm), mass (u), linewidth γ/2π (MHz).
type SpeciesRow = (&'static str, &'static str, f64, f64, f64, Option<f64>);

const SPECIES_TABLE: [SpeciesRow; 9] = [
    ("be", "Be", 234.9, 133.0, 9.012_183, None),
    ("mg", "Mg", 285.3, 162.0, 24.305, None),
    ("ca", "Ca", 272.2, 203.0, 40.078, None),
    ("sr", "Sr", 293.0, 218.0, 87.62, None),
    ("ba", "Ba", 350.2, 238.0, 137.327, None),
    ("zn", "Zn", 213.9, 132.0, 65.38, None),
    ("cd", "Cd", 228.9, 138.0, 112.414, Some(91.0)),
    ("hg", "Hg", 185.0, 119.0, 200.592, None),
    ("yb", "Yb", 398.9, 198.0, 173.045, None),
];

pub fn species_presets() -> Vec<SpeciesPreset> {
    SPECIES_TABLE
        .iter()
        .map(|&(key, name, sp, ion, mass_u, lw)| SpeciesPreset {
            key,
            name,
            lambda_sp: sp * NANOMETER,
            lambda_ion: ion * NANOMETER,
            mass: mass_u * ATOMIC_MASS_UNIT,
            gamma: lw.map(|mhz| 2.0 * PI * mhz * MEGAHERTZ),
        })
        .collect()
}

/// Case-insensitive lookup by key (`cd`) or symbol (`Cd`).
pub fn species_preset(key: &str) -> Option<SpeciesPreset> {
    species_presets()
        .into_iter()
        .find(|p| p.key.eq_ignore_ascii_case(key) || p.name.eq_ignore_ascii_case(key))
}

fn ev(min: f64, max: f64) -> Span {
    Span::new(min, max).scaled(ELECTRONVOLT)
}

fn um(min: f64, max: f64) -> Span {
    Span::new(min, max).scaled(MICROMETER)
}

fn mhz(min: f64, max: f64) -> Span {
    Span::new(min, max).scaled(MEGAHERTZ)
}

pub fn trap_presets() -> Vec<TrapPreset> {
    vec![
        TrapPreset {
            key: "ring_fork",
            name: "ring/fork quadrupole",
            kind: TrapKind::Quadrupole,
            depth: ev(0.8, 0.8),
            size_l: um(500.0, 500.0),
            rf_drive: 50.0 * MEGAHERTZ,
            secular: [mhz(0.5, 0.5), mhz(0.75, 0.75), mhz(1.25, 1.25)],
        },
        TrapPreset {
            key: "three_layer",
            name: "three-layer linear",
            kind: TrapKind::Linear,
            depth: ev(0.2, 5.0),
            size_l: um(300.0, 300.0),
            rf_drive: 47.0 * MEGAHERTZ,
            secular: [mhz(0.6, 4.0), mhz(8.1, 8.1), mhz(8.3, 8.3)],
        },
        TrapPreset {
            key: "gaas_chip",
            name: "GaAs chip linear",
            kind: TrapKind::Linear,
            depth: ev(0.08, 0.13),
            size_l: um(60.0, 60.0),
            rf_drive: 16.0 * MEGAHERTZ,
            secular: [mhz(0.8, 1.0), mhz(3.3, 3.3), mhz(4.3, 4.3)],
        },
        TrapPreset {
            key: "double_needle",
            name: "double-needle quadrupole",
            kind: TrapKind::Quadrupole,
            depth: ev(0.02, 5.0),
            size_l: um(45.0, 500.0),
            rf_drive: 29.0 * MEGAHERTZ,
            secular: [mhz(0.5, 10.0), mhz(0.25, 5.0), mhz(0.25, 5.0)],
        },
        TrapPreset {
            key: "four_rod",
            name: "four-rod linear",
            kind: TrapKind::Linear,
            depth: ev(0.5, 2.0),
            size_l: um(700.0, 700.0),
            rf_drive: 36.0 * MEGAHERTZ,
            secular: [mhz(0.25, 0.70), mhz(0.90, 0.90), mhz(0.91, 0.91)],
        },
    ]
}

pub fn trap_preset(key: &str) -> Option<TrapPreset> {
    trap_presets().into_iter().find(|t| t.key.eq_ignore_ascii_case(key))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

// Values are divided back into table units; rounding noise from the unit
// round trip is removed by printing with 12 significant digits.
fn tidy(x: f64) -> String {
    let s = format!("{:.12e}", x);
    s.parse::<f64>().map(|v| format!("{v}")).unwrap_or(s)
}

fn tidy_span(s: Span, unit: f64) -> [String; 2] {
    [tidy(s.min / unit), tidy(s.max / unit)]
}

pub fn write_species_csv<W: Write>(out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "key",
        "name",
        "lambda_sp_nm",
        "lambda_ion_nm",
        "mass_u",
        "linewidth_2pi_MHz",
        "two_photon_feasible",
    ])?;
    for p in species_presets() {
        w.write_record([
            p.key.to_string(),
            p.name.to_string(),
            tidy(p.lambda_sp / NANOMETER),
            tidy(p.lambda_ion / NANOMETER),
            tidy(p.mass / ATOMIC_MASS_UNIT),
            opt(p.gamma.map(|g| (g / (2.0 * PI * MEGAHERTZ) * 1e9).round() / 1e9)),
            p.two_photon_feasible().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_traps_csv<W: Write>(out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "key",
        "name",
        "kind",
        "depth_min_eV",
        "depth_max_eV",
        "size_l_min_um",
        "size_l_max_um",
        "rf_drive_MHz",
        "nu_x_min_MHz",
        "nu_x_max_MHz",
        "nu_y_min_MHz",
        "nu_y_max_MHz",
        "nu_z_min_MHz",
        "nu_z_max_MHz",
    ])?;
    for t in trap_presets() {
        let mut rec = vec![
            t.key.to_string(),
            t.name.to_string(),
            format!("{:?}", t.kind).to_lowercase(),
        ];
        rec.extend(tidy_span(t.depth, ELECTRONVOLT));
        rec.extend(tidy_span(t.size_l, MICROMETER));
        rec.push(tidy(t.rf_drive / MEGAHERTZ));
        for s in t.secular {
            rec.extend(tidy_span(s, MEGAHERTZ));
        }
        w.write_record(rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cadmium_row() {
        let cd = species_preset("Cd").unwrap();
        assert!((cd.lambda_sp / NANOMETER - 228.9).abs() < 1e-9);
        assert!((cd.lambda_ion / NANOMETER - 138.0).abs() < 1e-9);
        assert!(cd.two_photon_feasible());
    }

    #[test]
    fn nine_species_and_five_traps() {
        assert_eq!(species_presets().len(), 9);
        assert_eq!(trap_presets().len(), 5);
        let be = species_preset("be").unwrap();
        assert!((be.lambda_sp / NANOMETER - 234.9).abs() < 1e-9);
        let yb = species_preset("yb").unwrap();
        assert!((yb.lambda_sp / NANOMETER - 398.9).abs() < 1e-9);
        assert!((yb.lambda_ion / NANOMETER - 198.0).abs() < 1e-9);
    }

    #[test]
    fn yb_intermediate_below_midpoint() {
        let feasible: Vec<_> = species_presets()
            .into_iter()
            .filter(|p| !p.two_photon_feasible())
            .map(|p| p.key)
            .collect();
        assert_eq!(feasible, vec!["yb"]);
    }

    #[test]
    fn trap_rows() {
        let gaas = trap_preset("gaas_chip").unwrap();
        assert!((gaas.nominal_length() / MICROMETER - 60.0).abs() < 1e-9);
        assert!((gaas.rf_drive / MEGAHERTZ - 16.0).abs() < 1e-9);
        let rf = trap_preset("ring_fork").unwrap();
        assert!((rf.size_l.min / MICROMETER - 500.0).abs() < 1e-9);
        assert!(rf.depth.is_single());
        assert!((rf.depth.min / ELECTRONVOLT - 0.8).abs() < 1e-12);
        for t in trap_presets() {
            assert!(t.depth.min <= t.depth.max);
            assert!(t.size_l.min > 0.0 && t.size_l.min <= t.size_l.max);
        }
    }

    #[test]
    fn species_without_linewidth_needs_one() {
        assert!(species_preset("mg").unwrap().to_species(1e-20).is_err());
    }

    #[test]
    fn csv_headers_carry_units() {
        let mut buf = Vec::new();
        write_species_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().contains("lambda_sp_nm"));
        assert_eq!(text.lines().count(), 10);
        assert!(text.contains("cd,Cd,228.9,138,112.414,91,true"));

        let mut buf = Vec::new();
        write_traps_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 6);
        assert!(text.contains("double_needle,double-needle quadrupole,quadrupole,0.02,5,45,500,29,"));
    }
}
