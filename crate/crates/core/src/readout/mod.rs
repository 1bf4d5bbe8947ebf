//! Optical readout: gap change → cavity frequency shift → PDH voltage, the
//! cavity line shape, the optical spring used to calibrate g_OM, and the
//! smallest pressure the chain can resolve.

mod spring;

pub use spring::{
    fit_gom, intracavity_photons, optical_spring_shift, read_spring_table, write_spring_table,
    GomFit, SpringFixed, SPRING_HEADER,
};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::C;
use crate::error::{ensure_positive, Error, Result};
use crate::mechanics::{gap_change_to_pressure, line_load, pressure_to_gap_change, DeviceGeometry};

/// Sign of the cavity shift per unit gap increase. +1: closing the gap lowers
/// the resonance frequency.
pub const GAP_SHIFT_SIGN: f64 = 1.0;

/// Relative mismatch between Q_o and ω_c/κ above which a warning is raised.
const Q_CONSISTENCY: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityParams {
    /// Resonance wavelength, m.
    pub lambda_res: f64,
    /// Total linewidth κ, rad/s.
    pub kappa: f64,
    /// External coupling κ_e, rad/s.
    pub kappa_e: f64,
    pub q_o: f64,
    /// Optomechanical coupling, rad/s per m.
    pub g_om: f64,
}

impl CavityParams {
    pub fn reference_device() -> Self {
        CavityParams {
            lambda_res: 1586.3e-9,
            kappa: 2.0 * PI * 4.2e9,
            kappa_e: 2.0 * PI * 0.5e9,
            q_o: 4.5e4,
            g_om: 2.0 * PI * 50e9 / 1e-9,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("lambda_res", self.lambda_res)?;
        ensure_positive("kappa", self.kappa)?;
        ensure_positive("kappa_e", self.kappa_e)?;
        ensure_positive("Q_o", self.q_o)?;
        ensure_positive("g_OM", self.g_om)?;
        if self.kappa_e > self.kappa {
            return Err(Error::domain(format!(
                "kappa_e ({}) exceeds kappa ({})",
                self.kappa_e, self.kappa
            )));
        }
        Ok(())
    }

    /// Angular resonance frequency ω_c = 2πc/λ.
    pub fn omega_c(&self) -> f64 {
        2.0 * PI * C / self.lambda_res
    }

    pub fn linewidth_hz(&self) -> f64 {
        self.kappa / (2.0 * PI)
    }

    /// Non-fatal inconsistencies, currently Q_o against ω_c/κ.
    pub fn consistency_warnings(&self) -> Vec<String> {
        let implied = self.omega_c() / self.kappa;
        let rel = (self.q_o - implied).abs() / implied;
        if rel > Q_CONSISTENCY {
            vec![format!(
                "Q_o = {:.4e} differs from omega_c/kappa = {:.4e} by {:.1} %",
                self.q_o,
                implied,
                100.0 * rel
            )]
        } else {
            Vec::new()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReadoutCalibration {
    /// PDH slope, V/Hz.
    pub pdh_slope: f64,
    /// Smallest resolvable cavity shift, Hz.
    pub min_resolvable_shift: f64,
    /// Long-term drift bound, Hz.
    pub drift_bound: f64,
}

impl ReadoutCalibration {
    pub fn reference_device() -> Self {
        ReadoutCalibration {
            pdh_slope: 0.025e-3 / 1e6,
            min_resolvable_shift: 10e6,
            drift_bound: 30e6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("pdh_slope", self.pdh_slope)?;
        ensure_positive("min_resolvable_shift", self.min_resolvable_shift)?;
        ensure_positive("drift_bound", self.drift_bound)
    }
}

fn ensure_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite, got {v}")))
    }
}

/// Cavity shift in Hz for a signed gap change (positive = gap opens).
pub fn gap_change_to_frequency_shift(delta_gap: f64, cavity: &CavityParams) -> Result<f64> {
    ensure_finite("gap change", delta_gap)?;
    // + 0.0 turns a signed zero into +0
    Ok(GAP_SHIFT_SIGN * cavity.g_om / (2.0 * PI) * delta_gap + 0.0)
}

/// Signed gap change producing `shift` Hz.
pub fn frequency_shift_to_gap_change(shift: f64, cavity: &CavityParams) -> Result<f64> {
    ensure_finite("frequency shift", shift)?;
    ensure_positive("g_OM", cavity.g_om)?;
    Ok(GAP_SHIFT_SIGN * shift * 2.0 * PI / cavity.g_om)
}

/// Single-port reflection r = 1 − κ_e/(κ/2 + iΔ) at detuning Δ = 2π·`detuning` Hz.
/// Returns `(|r|, arg r)`.
pub fn cavity_response(detuning: f64, cavity: &CavityParams) -> (f64, f64) {
    if detuning.is_infinite() {
        return (1.0, 0.0);
    }
    let delta = 2.0 * PI * detuning;
    let r = Complex64::new(1.0, 0.0) - cavity.kappa_e / Complex64::new(0.5 * cavity.kappa, delta);
    (r.norm(), r.arg())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PdhReading {
    pub volts: f64,
    /// The shift exceeded the linear window ±κ/4 and was clamped to it.
    pub clamped: bool,
}

/// V = slope × shift, with the shift clamped to the linear window ±κ/4.
pub fn pdh_voltage(
    freq_shift: f64,
    calib: &ReadoutCalibration,
    cavity: &CavityParams,
) -> Result<PdhReading> {
    ensure_finite("frequency shift", freq_shift)?;
    let window = 0.25 * cavity.linewidth_hz();
    let clamped = freq_shift.abs() > window;
    let shift = freq_shift.clamp(-window, window);
    Ok(PdhReading {
        volts: calib.pdh_slope * shift,
        clamped,
    })
}

/// Forward chain for one attractive pressure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Transduction {
    pub pressure_pa: f64,
    /// Gap closing, m.
    pub gap_change_m: f64,
    pub freq_shift_hz: f64,
    pub pdh_voltage_v: f64,
    pub pdh_clamped: bool,
}

pub fn transduce(
    pressure: f64,
    geometry: &DeviceGeometry,
    cavity: &CavityParams,
    calib: &ReadoutCalibration,
) -> Result<Transduction> {
    let closing = pressure_to_gap_change(pressure, geometry)?;
    let shift = gap_change_to_frequency_shift(-closing, cavity)?;
    let pdh = pdh_voltage(shift, calib, cavity)?;
    Ok(Transduction {
        pressure_pa: pressure,
        gap_change_m: closing,
        freq_shift_hz: shift,
        pdh_voltage_v: pdh.volts,
        pdh_clamped: pdh.clamped,
    })
}

/// Pressure floor and the intermediate quantities of the inverted chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PressureFloor {
    pub pressure_pa: f64,
    pub gap_change_m: f64,
    pub per_beam_deflection_m: f64,
    pub line_load_n_per_m: f64,
    /// Resolvable shift as a fraction of the linewidth κ/2π.
    pub linewidth_fraction: f64,
}

/// Smallest pressure whose cavity shift equals the resolvable shift.
pub fn min_detectable_pressure(
    geometry: &DeviceGeometry,
    cavity: &CavityParams,
    calib: &ReadoutCalibration,
) -> Result<PressureFloor> {
    cavity.validate()?;
    calib.validate()?;
    let gap = frequency_shift_to_gap_change(calib.min_resolvable_shift, cavity)?.abs();
    let pressure = gap_change_to_pressure(gap, geometry)?;
    Ok(PressureFloor {
        pressure_pa: pressure,
        gap_change_m: gap,
        per_beam_deflection_m: 0.5 * gap,
        line_load_n_per_m: line_load(pressure, geometry),
        linewidth_fraction: calib.min_resolvable_shift / cavity.linewidth_hz(),
    })
}
