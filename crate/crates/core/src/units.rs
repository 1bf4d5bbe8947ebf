//! Unit-suffixed quantities for configuration keys and command-line values.
//!
//! Config keys carry their unit after the last recognised suffix
//! (`gap_nm = 100`), command-line values carry it after the number
//! (`--gap 100nm`). Everything is converted to SI on the way in.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Physical dimension of a quantity, each with its accepted unit spellings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Area,
    Pressure,
    Temperature,
    /// Cyclic frequency, stored in Hz.
    Frequency,
    /// Angular frequency, stored in rad/s. Cyclic units are multiplied by 2π.
    AngularFrequency,
    Mass,
    Density,
    Resistance,
    /// ρ·ℓ, Ω·m².
    ResistivityLength,
    Conductivity,
    Power,
    /// PDH slope, V/Hz.
    VoltsPerHertz,
    /// Optomechanical coupling, stored in rad/s per m. Cyclic units are multiplied by 2π.
    AngularCoupling,
    Dimensionless,
}

const EV_OVER_HBAR: f64 = 1.602_176_634e-19 / 1.054_571_817e-34;

impl Dimension {
    /// `(suffix, factor to SI)` pairs.
    pub fn units(self) -> &'static [(&'static str, f64)] {
        match self {
            Dimension::Length => &[
                ("m", 1.0),
                ("mm", 1e-3),
                ("um", 1e-6),
                ("nm", 1e-9),
                ("pm", 1e-12),
                ("fm", 1e-15),
            ],
            Dimension::Area => &[("m2", 1.0), ("um2", 1e-12), ("nm2", 1e-18)],
            Dimension::Pressure => &[
                ("Pa", 1.0),
                ("mPa", 1e-3),
                ("kPa", 1e3),
                ("MPa", 1e6),
                ("GPa", 1e9),
            ],
            Dimension::Temperature => &[("K", 1.0), ("mK", 1e-3)],
            Dimension::Frequency => &[
                ("Hz", 1.0),
                ("kHz", 1e3),
                ("MHz", 1e6),
                ("GHz", 1e9),
                ("THz", 1e12),
            ],
            Dimension::AngularFrequency => &[
                ("rad_per_s", 1.0),
                ("Hz", 2.0 * PI),
                ("kHz", 2.0 * PI * 1e3),
                ("MHz", 2.0 * PI * 1e6),
                ("GHz", 2.0 * PI * 1e9),
                ("THz", 2.0 * PI * 1e12),
                ("eV", EV_OVER_HBAR),
                ("meV", 1e-3 * EV_OVER_HBAR),
            ],
            Dimension::Mass => &[
                ("kg", 1.0),
                ("g", 1e-3),
                ("ng", 1e-12),
                ("pg", 1e-15),
                ("fg", 1e-18),
            ],
            Dimension::Density => &[("kg_per_m3", 1.0), ("g_per_cm3", 1e3)],
            Dimension::Resistance => &[("ohm", 1.0), ("kohm", 1e3)],
            Dimension::ResistivityLength => &[("ohm_m2", 1.0)],
            Dimension::Conductivity => &[("S_per_m", 1.0)],
            Dimension::Power => &[("W", 1.0), ("mW", 1e-3), ("uW", 1e-6), ("nW", 1e-9)],
            Dimension::VoltsPerHertz => &[("V_per_Hz", 1.0), ("mV_per_MHz", 1e-9)],
            Dimension::AngularCoupling => &[
                ("rad_per_s_per_m", 1.0),
                ("Hz_per_m", 2.0 * PI),
                ("GHz_per_nm", 2.0 * PI * 1e18),
                ("MHz_per_pm", 2.0 * PI * 1e18),
            ],
            Dimension::Dimensionless => &[("dimensionless", 1.0)],
        }
    }

    pub fn unit_list(self) -> String {
        self.units()
            .iter()
            .map(|u| u.0)
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// Factor for `unit`, if it belongs to this dimension.
    pub fn factor(self, unit: &str) -> Option<f64> {
        self.units().iter().find(|u| u.0 == unit).map(|u| u.1)
    }
}

/// Parses `"<number><unit>"`, e.g. `100nm`, `10mK`, `0.5Pa`. A bare `0` is accepted.
/// Dimensionless quantities also accept a bare number.
pub fn parse_quantity(text: &str, dim: Dimension) -> Result<f64> {
    let text = text.trim();
    let bad = || {
        Error::Config(vec![format!(
            "cannot read {text:?} as a quantity; expected a number followed by one of: {}",
            dim.unit_list()
        )])
    };
    let mut units: Vec<_> = dim.units().to_vec();
    units.sort_by_key(|u| std::cmp::Reverse(u.0.len()));
    for (unit, factor) in units {
        if let Some(number) = text.strip_suffix(unit) {
            let number = number.trim_end();
            if let Ok(v) = number.parse::<f64>() {
                if v.is_finite() && !number.is_empty() {
                    return Ok(v * factor);
                }
            }
        }
    }
    match text.parse::<f64>() {
        Ok(0.0) => Ok(0.0),
        Ok(v) if dim == Dimension::Dimensionless && v.is_finite() => Ok(v),
        _ => Err(bad()),
    }
}

/// Splits a config key into the stem and unit for `dim`, e.g.
/// `("gap_nm", Length) → Some(("gap", 1e-9))`.
pub fn split_key(key: &str, dim: Dimension) -> Option<(&str, f64)> {
    dim.units()
        .iter()
        .filter_map(|&(unit, factor)| {
            key.strip_suffix(unit)
                .and_then(|s| s.strip_suffix('_'))
                .filter(|stem| !stem.is_empty())
                .map(|stem| (stem, factor, unit.len()))
        })
        .max_by_key(|x| x.2)
        .map(|(stem, factor, _)| (stem, factor))
}
