//! Measurement-chain model for an on-chip Casimir experiment between
//! superconducting aluminium nanobeams.
//!
//! The crate covers the whole chain from material response to a detectability
//! verdict:
//!
//! * [`dielectric`] and [`lifshitz`]: Casimir pressure between plates under the
//!   ideal, plasma, Drude and two-fluid superconductor descriptions, at finite
//!   temperature or T = 0, plus the proximity-force average for the beams.
//! * [`film`]: four-point R(T) ingestion, T_c extraction and dirty-limit
//!   coherence length / penetration depth.
//! * [`mechanics`]: taut-string model of the tensioned nanobeams.
//! * [`readout`]: gap change → cavity shift → PDH voltage, optical spring and
//!   the pressure floor.
//! * [`designer`]: gap sweeps, temperature scans and verdict tables.
//! * [`config`], [`units`], [`io`] and [`cli`]: configuration files,
//!   unit-suffixed quantities, CSV/JSON output and the `casimir` binary.

// NaN must fail the `!(x > y)` style range checks used throughout
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod constants;
pub mod designer;
pub mod dielectric;
pub mod error;
pub mod film;
pub mod io;
pub mod lifshitz;
pub mod mechanics;
pub mod quadrature;
pub mod readout;
pub mod units;

pub use dielectric::MaterialModel;
pub use error::{Error, Result};
pub use lifshitz::{LifshitzNumerics, PressureResult};
