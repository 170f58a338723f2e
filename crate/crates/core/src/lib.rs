//! Photoionization loading of atomic ions into rf traps with ultrafast pulses.
//!
//! The crate is organised around four pieces:
//!
//! * [`physkit`]: constants, domain types, preset tables and single-atom
//!   quantities such as the Rabi angle and photoionization rate;
//! * [`bloch`]: three-level pulse-train dynamics, integrated numerically and
//!   in closed form;
//! * [`vaporflux`]: trajectories through the Gaussian focus and thermal
//!   averages giving the ion flux, loading rate and efficiency;
//! * [`scan`]: configuration parsing, parameter scans, fits and CSV output.

pub mod bloch;
pub mod constants;
pub mod ode;
pub mod physkit;
pub mod quadrature;
pub mod scan;
pub mod vaporflux;
pub mod warning;

mod error;

pub use error::Error;
pub use warning::Warning;
