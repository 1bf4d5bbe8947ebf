//! Superconducting film characterisation: four-point R(T) data, T_c
//! extraction and the dirty-limit length scales of the aluminium film.
//!
//! In the dirty limit (ℓ ≪ ξ₀) the coherence length and penetration depth are
//!
//! ```text
//! ξ(T) = 0.85 √(ξ₀ℓ) √(T_c/(T_c − T))        ≈ √(ξ₀ℓ)
//! λ(T) = 0.62 λ_L √(ξ₀/ℓ) √(T_c/(T_c − T))   ≈ λ_L √(ξ₀/ℓ)
//! ```
//!
//! and ℓ follows from the 4 K conductivity through the material constant ρ·ℓ.
//! Both the exact (prefactor, temperature dependent) and the approximate
//! forms are available; reports always say which one produced a number.

mod ingest;
mod transition;

pub use ingest::{ingest_rt_table, RT_HEADER};
pub use transition::{extract_tc, RTCurve, Step, TcResult};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};

/// ρ·ℓ = m_e v_F / (n e²) for aluminium, Ω·m².
pub const AL_RHO_ELL: f64 = 4e-16;

const COHERENCE_PREFACTOR: f64 = 0.85;
const PENETRATION_PREFACTOR: f64 = 0.62;

/// Material and wire parameters of the film.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilmParams {
    /// Bulk coherence length ξ₀, m.
    pub xi0: f64,
    /// London penetration depth λ_L, m.
    pub lambda_l: f64,
    /// ρ·ℓ, Ω·m².
    pub rho_ell: f64,
    /// Length of the four-point wire, m.
    pub wire_length: f64,
    /// Cross-section of the four-point wire, m².
    pub cross_section: f64,
    pub t_c: f64,
}

impl FilmParams {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("xi0", self.xi0)?;
        ensure_positive("lambda_L", self.lambda_l)?;
        ensure_positive("rho_ell", self.rho_ell)?;
        ensure_positive("wire_length", self.wire_length)?;
        ensure_positive("cross_section", self.cross_section)?;
        ensure_positive("T_c", self.t_c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LengthMode {
    /// With the 0.85 / 0.62 prefactors and the (1 − T/T_c)^{-1/2} factor.
    Exact,
    /// Temperature-independent √(ξ₀ℓ) and λ_L√(ξ₀/ℓ).
    Approx,
}

/// σ = L / (ζ R), in (Ω·m)⁻¹.
pub fn conductivity_from_four_point(
    length: f64,
    cross_section: f64,
    resistance: f64,
) -> Result<f64> {
    ensure_positive("wire length", length)?;
    ensure_positive("cross-section", cross_section)?;
    ensure_positive("resistance", resistance)?;
    Ok(length / (cross_section * resistance))
}

/// ℓ = σ · (ρ·ℓ).
pub fn mean_free_path(sigma: f64, rho_ell: f64) -> Result<f64> {
    ensure_positive("conductivity", sigma)?;
    ensure_positive("rho_ell", rho_ell)?;
    Ok(sigma * rho_ell)
}

fn thermal_factor(temperature: f64, t_c: f64) -> Result<f64> {
    ensure_non_negative("temperature", temperature)?;
    ensure_positive("T_c", t_c)?;
    if temperature >= t_c {
        return Err(Error::domain(format!(
            "exact dirty-limit lengths diverge at and above T_c (T = {temperature} K, T_c = {t_c} K)"
        )));
    }
    Ok((t_c / (t_c - temperature)).sqrt())
}

/// Dirty-limit coherence length ξ(T), m. `temperature` and `t_c` are ignored in approx mode.
pub fn coherence_length(
    xi0: f64,
    ell: f64,
    temperature: f64,
    t_c: f64,
    mode: LengthMode,
) -> Result<f64> {
    ensure_positive("xi0", xi0)?;
    ensure_positive("mean free path", ell)?;
    let base = (xi0 * ell).sqrt();
    match mode {
        LengthMode::Approx => Ok(base),
        LengthMode::Exact => Ok(COHERENCE_PREFACTOR * base * thermal_factor(temperature, t_c)?),
    }
}

/// Dirty-limit penetration depth λ(T), m.
pub fn penetration_depth(
    lambda_l: f64,
    xi0: f64,
    ell: f64,
    temperature: f64,
    t_c: f64,
    mode: LengthMode,
) -> Result<f64> {
    ensure_positive("lambda_L", lambda_l)?;
    ensure_positive("xi0", xi0)?;
    ensure_positive("mean free path", ell)?;
    let base = lambda_l * (xi0 / ell).sqrt();
    match mode {
        LengthMode::Approx => Ok(base),
        LengthMode::Exact => Ok(PENETRATION_PREFACTOR * base * thermal_factor(temperature, t_c)?),
    }
}

/// ξ and λ for one mean free path, in both modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirtyLimitLengths {
    pub mean_free_path_m: f64,
    pub temperature_k: f64,
    pub coherence_exact_m: f64,
    pub coherence_approx_m: f64,
    pub penetration_exact_m: f64,
    pub penetration_approx_m: f64,
}

pub fn dirty_limit_lengths(
    film: &FilmParams,
    ell: f64,
    temperature: f64,
) -> Result<DirtyLimitLengths> {
    film.validate()?;
    Ok(DirtyLimitLengths {
        mean_free_path_m: ell,
        temperature_k: temperature,
        coherence_exact_m: coherence_length(
            film.xi0,
            ell,
            temperature,
            film.t_c,
            LengthMode::Exact,
        )?,
        coherence_approx_m: coherence_length(
            film.xi0,
            ell,
            temperature,
            film.t_c,
            LengthMode::Approx,
        )?,
        penetration_exact_m: penetration_depth(
            film.lambda_l,
            film.xi0,
            ell,
            temperature,
            film.t_c,
            LengthMode::Exact,
        )?,
        penetration_approx_m: penetration_depth(
            film.lambda_l,
            film.xi0,
            ell,
            temperature,
            film.t_c,
            LengthMode::Approx,
        )?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const XI0: f64 = 1600e-9;
    const LAMBDA_L: f64 = 16e-9;
    const ELL: f64 = 10.8e-9;

    #[test]
    fn conductivity_cases() {
        assert_eq!(conductivity_from_four_point(1.0, 1.0, 1.0).unwrap(), 1.0);
        let s1 = conductivity_from_four_point(220e-6, 6.3e-15, 20.0).unwrap();
        let s2 = conductivity_from_four_point(220e-6, 6.3e-15, 40.0).unwrap();
        assert!((s1 - 2.0 * s2).abs() < 1e-9 * s1);
        // R chosen so that L/(ζR) = 4.1e7
        let r = 220e-6 / (6.3e-15 * 4.1e7);
        let s = conductivity_from_four_point(220e-6, 6.3e-15, r).unwrap();
        assert!((s - 4.1e7).abs() < 1e-6 * 4.1e7);
        assert!(conductivity_from_four_point(0.0, 1.0, 1.0).is_err());
        assert!(conductivity_from_four_point(1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn mean_free_path_from_quoted_conductivity() {
        let ell = mean_free_path(4.1e7, AL_RHO_ELL).unwrap();
        assert!((ell - 16.4e-9).abs() < 1e-15);
        assert_eq!(mean_free_path(8.2e7, AL_RHO_ELL).unwrap(), 2.0 * ell);
        assert!(mean_free_path(4.1e7, 0.0).is_err());
    }

    #[test]
    fn coherence_length_values() {
        let approx = coherence_length(XI0, ELL, 0.0, 0.9, LengthMode::Approx).unwrap();
        assert!((approx - 131.45e-9).abs() < 0.01e-9, "{approx}");
        let exact0 = coherence_length(XI0, ELL, 0.0, 0.9, LengthMode::Exact).unwrap();
        assert!((exact0 - 0.85 * approx).abs() < 1e-20);
        let near = coherence_length(XI0, ELL, 0.9 * (1.0 - 1e-6), 0.9, LengthMode::Exact).unwrap();
        assert!((near / approx - 850.0).abs() < 1e-3, "{}", near / approx);
        let nearer =
            coherence_length(XI0, ELL, 0.9 * (1.0 - 1e-8), 0.9, LengthMode::Exact).unwrap();
        assert!(nearer > 1e3 * approx);
        assert!(coherence_length(XI0, ELL, 0.9, 0.9, LengthMode::Exact).is_err());
        assert!(coherence_length(XI0, ELL, 5.0, 0.9, LengthMode::Approx).is_ok());
    }

    #[test]
    fn penetration_depth_values() {
        let exact = penetration_depth(LAMBDA_L, XI0, ELL, 0.0, 0.9, LengthMode::Exact).unwrap();
        assert!((exact - 120.74e-9).abs() < 0.01e-9, "{exact}");
        let approx = penetration_depth(LAMBDA_L, XI0, ELL, 0.0, 0.9, LengthMode::Approx).unwrap();
        assert!((approx - 194.75e-9).abs() < 0.01e-9, "{approx}");
        let clean = penetration_depth(LAMBDA_L, XI0, XI0, 0.0, 0.9, LengthMode::Approx).unwrap();
        assert!((clean - LAMBDA_L).abs() < 1e-22);
        assert!(penetration_depth(LAMBDA_L, XI0, ELL, 1.0, 0.9, LengthMode::Exact).is_err());
    }

    #[test]
    fn ratio_is_temperature_independent() {
        let ratio = |t: f64| {
            penetration_depth(LAMBDA_L, XI0, ELL, t, 0.9, LengthMode::Exact).unwrap()
                / coherence_length(XI0, ELL, t, 0.9, LengthMode::Exact).unwrap()
        };
        let r0 = ratio(0.0);
        for t in [0.1, 0.5, 0.8, 0.899] {
            assert!((ratio(t) - r0).abs() < 1e-12 * r0);
        }
        // (1 − T/T_c)^{-1/2} scaling
        let xi = |t| coherence_length(XI0, ELL, t, 0.9, LengthMode::Exact).unwrap();
        assert!((xi(0.675) / xi(0.0) - 2.0).abs() < 1e-12);
    }
}
