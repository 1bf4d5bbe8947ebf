//! Physical constants (CODATA 2018, exact where the SI fixes them) and the
//! thermal frequency helpers used by the Lifshitz engine.
//!
//! Every quantity inside the library is SI: m, s, K, Pa, Ω, rad/s. Other
//! units (nm, GHz, mK, ...) are only accepted at the CLI and config boundary,
//! see [`crate::units`].

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum, m/s.
pub const C: f64 = 299_792_458.0;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Elementary charge, C.
pub const E_CHARGE: f64 = 1.602_176_634e-19;
/// Electron mass, kg.
pub const M_E: f64 = 9.109_383_701_5e-31;

/// The fixed set of constants as a value, for reports.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub c: f64,
    pub k_b: f64,
    pub e: f64,
    pub m_e: f64,
}

pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    hbar: HBAR,
    c: C,
    k_b: K_B,
    e: E_CHARGE,
    m_e: M_E,
};

/// Apéry's constant ζ(3).
pub const ZETA_3: f64 = 1.202_056_903_159_594_3;

/// Matsubara frequency ξ_n = 2π n k_B T / ħ in rad/s. Requires T > 0.
pub fn matsubara_frequency(n: u64, temperature: f64) -> Result<f64> {
    if !temperature.is_finite() || temperature <= 0.0 {
        return Err(Error::domain(format!(
            "Matsubara frequencies need a finite temperature > 0 K, got {temperature}"
        )));
    }
    Ok(2.0 * PI * n as f64 * K_B * temperature / HBAR)
}

/// k_B T / ħ in rad/s.
pub fn thermal_frequency(temperature: f64) -> Result<f64> {
    if !temperature.is_finite() || temperature < 0.0 {
        return Err(Error::domain(format!(
            "temperature must be finite and >= 0 K, got {temperature}"
        )));
    }
    Ok(K_B * temperature / HBAR)
}
