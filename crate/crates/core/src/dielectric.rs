//! Dielectric response evaluated on the imaginary frequency axis.
//!
//! On the imaginary axis ε(iξ) is real and decreases monotonically towards 1,
//! so no complex arithmetic is needed. The zero-frequency point is never
//! evaluated here: the Lifshitz engine uses the analytic reflection limits
//! instead, because that is exactly where the Drude and plasma descriptions
//! part ways.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};

/// Dielectric model of a plate material.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum MaterialModel {
    /// Perfect conductor; handled through its exact reflection limits.
    IdealMetal,
    /// Dissipationless free electrons, ε = 1 + ω_p²/ξ².
    Plasma { omega_p: f64 },
    /// Free electrons with relaxation, ε = 1 + ω_p²/(ξ(ξ+γ)).
    Drude { omega_p: f64, gamma: f64 },
    /// Gorter–Casimir two-fluid superconductor: a superfluid plasma-like
    /// component of weight f_s(T) plus a normal Drude component.
    SuperconductorTwoFluid { omega_p: f64, gamma: f64, t_c: f64 },
}

impl MaterialModel {
    /// Checks the parameter invariants (ω_p > 0, γ ≥ 0, T_c > 0).
    pub fn validate(&self) -> Result<()> {
        match *self {
            MaterialModel::IdealMetal => Ok(()),
            MaterialModel::Plasma { omega_p } => ensure_positive("omega_p", omega_p),
            MaterialModel::Drude { omega_p, gamma } => {
                ensure_positive("omega_p", omega_p)?;
                ensure_non_negative("gamma", gamma)
            }
            MaterialModel::SuperconductorTwoFluid {
                omega_p,
                gamma,
                t_c,
            } => {
                ensure_positive("omega_p", omega_p)?;
                ensure_non_negative("gamma", gamma)?;
                ensure_positive("t_c", t_c)
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            MaterialModel::IdealMetal => "ideal",
            MaterialModel::Plasma { .. } => "plasma",
            MaterialModel::Drude { .. } => "drude",
            MaterialModel::SuperconductorTwoFluid { .. } => "two_fluid",
        }
    }

    /// Permittivity at imaginary frequency iξ; see [`eps_imag_freq`].
    pub fn permittivity(&self, xi: f64, temperature: f64) -> Result<f64> {
        eps_imag_freq(self, xi, temperature)
    }

    /// Squared plasma frequency that survives as ξ → 0 in ξ²(ε − 1), i.e. the
    /// weight of the lossless carriers. Zero for a purely dissipative response.
    pub(crate) fn zero_frequency_plasma_sq(&self, temperature: f64) -> Result<f64> {
        Ok(match *self {
            MaterialModel::IdealMetal => f64::INFINITY,
            MaterialModel::Plasma { omega_p } => omega_p * omega_p,
            // γ = 0 is the plasma model written differently
            MaterialModel::Drude {
                omega_p,
                gamma: 0.0,
            } => omega_p * omega_p,
            MaterialModel::Drude { .. } => 0.0,
            MaterialModel::SuperconductorTwoFluid {
                omega_p,
                gamma,
                t_c,
            } => {
                let fs = superfluid_fraction(temperature, t_c)?;
                if gamma == 0.0 {
                    omega_p * omega_p
                } else {
                    fs * omega_p * omega_p
                }
            }
        })
    }
}

/// Gorter–Casimir superfluid fraction 1 − (T/T_c)⁴, clamped to 0 at and above T_c.
pub fn superfluid_fraction(temperature: f64, t_c: f64) -> Result<f64> {
    ensure_non_negative("temperature", temperature)?;
    ensure_positive("T_c", t_c)?;
    if temperature >= t_c {
        return Ok(0.0);
    }
    let r = temperature / t_c;
    Ok(1.0 - r.powi(4))
}

/// ε(iξ) for the parametric models. `xi` must be strictly positive.
pub fn eps_imag_freq(model: &MaterialModel, xi: f64, temperature: f64) -> Result<f64> {
    if !(xi.is_finite() && xi > 0.0) {
        return Err(Error::domain(format!(
            "zero-frequency term must use the analytic limit path (xi = {xi})"
        )));
    }
    model.validate()?;
    let eps = match *model {
        MaterialModel::IdealMetal => {
            return Err(Error::Contract(
                "ideal metal has no finite permittivity; use its exact reflection limits".into(),
            ))
        }
        MaterialModel::Plasma { omega_p } => 1.0 + plasma_term(omega_p, xi),
        MaterialModel::Drude { omega_p, gamma } => 1.0 + drude_term(omega_p, gamma, xi),
        MaterialModel::SuperconductorTwoFluid {
            omega_p,
            gamma,
            t_c,
        } => {
            let fs = superfluid_fraction(temperature, t_c)?;
            1.0 + fs * plasma_term(omega_p, xi) + (1.0 - fs) * drude_term(omega_p, gamma, xi)
        }
    };
    Ok(eps)
}

fn plasma_term(omega_p: f64, xi: f64) -> f64 {
    let r = omega_p / xi;
    r * r
}

fn drude_term(omega_p: f64, gamma: f64, xi: f64) -> f64 {
    omega_p * omega_p / (xi * (xi + gamma))
}
