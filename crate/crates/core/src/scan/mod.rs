//! Configuration, parameter scans, fits and tabular output.

mod check;
mod config;
mod fit;
mod output;
mod run;
pub mod units;

pub use check::{oracle_triangle, TriangleCase, ANALYTIC_TOLERANCE, MC_SIGMAS};
pub use config::{
    parse_config, parse_point, AxisKind, ConfigError, McSettings, PointConfig, ScanAxis, ScanConfig, Settings, Setup,
    Spacing, ValueKind, KEYS,
};
pub use fit::{fit_gaussian_fwhm, fit_power_law, FitError, GaussianFit, PowerLaw};
pub use output::{cadmium_reference_rate, emit_csv, emit_report, read_csv, ReadError, VALUE_COLUMNS};
pub use run::{evaluate, evaluate_weighted, run_scan, Evaluation, ScanRow, QUADRATURE_REL};
