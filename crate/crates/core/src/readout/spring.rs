use std::f64::consts::PI;
use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::CavityParams;
use crate::constants::HBAR;
use crate::error::{ensure_non_negative, ensure_positive, Error, Result};

pub const SPRING_HEADER: &str = "detuning_Hz,omega_m_shift_Hz";

const MIN_SPRING_POINTS: usize = 5;
const BOOTSTRAP_SAMPLES: usize = 400;
/// Relative standard error above which a fit is flagged as poorly determined.
const LARGE_UNCERTAINTY: f64 = 0.5;

/// Steady-state intracavity photon number for input power `p_in` (W) at
/// detuning `detuning` (Hz): n = κ_e P/(ħω_c (Δ² + κ²/4)).
pub fn intracavity_photons(p_in: f64, detuning: f64, cavity: &CavityParams) -> Result<f64> {
    ensure_non_negative("input power", p_in)?;
    let delta = 2.0 * PI * detuning;
    Ok(cavity.kappa_e * p_in
        / (HBAR * cavity.omega_c() * (delta * delta + 0.25 * cavity.kappa * cavity.kappa)))
}

/// Response per unit g_OM²: the spring shift (Hz) equals g_OM² times this.
fn spring_kernel(detuning: f64, n_cav: f64, kappa: f64, omega_m: f64, m_eff: f64) -> f64 {
    let delta = 2.0 * PI * detuning;
    2.0 * n_cav * HBAR / (m_eff * omega_m) * delta
        / (delta * delta + 0.25 * kappa * kappa)
        / (2.0 * PI)
}

/// Mechanical frequency shift (Hz) from the optical spring in the unresolved-sideband limit:
/// δω_m = (2 n ħ g² / (m_eff ω_m)) Δ/(Δ² + κ²/4).
pub fn optical_spring_shift(
    detuning: f64,
    n_cav: f64,
    cavity: &CavityParams,
    omega_m: f64,
    m_eff: f64,
) -> Result<f64> {
    ensure_positive("omega_m", omega_m)?;
    ensure_positive("m_eff", m_eff)?;
    ensure_non_negative("intracavity photon number", n_cav)?;
    Ok(cavity.g_om * cavity.g_om * spring_kernel(detuning, n_cav, cavity.kappa, omega_m, m_eff))
}

/// Quantities held fixed while fitting g_OM.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpringFixed {
    pub n_cav: f64,
    pub m_eff: f64,
    pub omega_m: f64,
    pub kappa: f64,
    /// n_cav is only loosely known; the fit then also reports g_OM·√n_cav.
    #[serde(default)]
    pub n_cav_uncertain: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GomFit {
    /// rad/s per m.
    pub g_om: f64,
    /// Bootstrap standard error of g_OM, rad/s per m.
    pub std_error: f64,
    pub large_uncertainty: bool,
    pub residual_rms_hz: f64,
    pub points: usize,
    /// The combination the data actually constrain, present when n_cav is uncertain.
    pub g_sqrt_n: Option<f64>,
    pub seed: u64,
}

fn least_squares(h: &[f64], y: &[f64]) -> f64 {
    let num: f64 = h.iter().zip(y).map(|(a, b)| a * b).sum();
    let den: f64 = h.iter().map(|a| a * a).sum();
    num / den
}

/// Linear least squares in θ = g_OM² with a seeded residual bootstrap for the error.
pub fn fit_gom(data: &[(f64, f64)], fixed: &SpringFixed, seed: u64) -> Result<GomFit> {
    ensure_positive("m_eff", fixed.m_eff)?;
    ensure_positive("omega_m", fixed.omega_m)?;
    ensure_positive("kappa", fixed.kappa)?;
    ensure_positive("n_cav", fixed.n_cav)?;
    if data.len() < MIN_SPRING_POINTS {
        return Err(Error::Conditioning(format!(
            "need at least {MIN_SPRING_POINTS} points, got {}",
            data.len()
        )));
    }
    if data.iter().any(|&(d, s)| !d.is_finite() || !s.is_finite()) {
        return Err(Error::domain("spring data contain non-finite values"));
    }
    if !(data.iter().any(|p| p.0 > 0.0) && data.iter().any(|p| p.0 < 0.0)) {
        return Err(Error::Conditioning("detunings must span both signs".into()));
    }

    let h: Vec<f64> = data
        .iter()
        .map(|&(d, _)| spring_kernel(d, fixed.n_cav, fixed.kappa, fixed.omega_m, fixed.m_eff))
        .collect();
    let y: Vec<f64> = data.iter().map(|p| p.1).collect();
    let theta = least_squares(&h, &y);
    let g = theta.max(0.0).sqrt();
    let residuals: Vec<f64> = h.iter().zip(&y).map(|(a, b)| b - theta * a).collect();
    let rms = (residuals.iter().map(|r| r * r).sum::<f64>() / residuals.len() as f64).sqrt();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut resampled = vec![0.0; y.len()];
    let samples: Vec<f64> = (0..BOOTSTRAP_SAMPLES)
        .map(|_| {
            for (i, slot) in resampled.iter_mut().enumerate() {
                *slot = theta * h[i] + residuals[rng.random_range(0..residuals.len())];
            }
            least_squares(&h, &resampled).max(0.0).sqrt()
        })
        .collect();
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let std_error = (samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>()
        / (samples.len() - 1) as f64)
        .sqrt();

    Ok(GomFit {
        g_om: g,
        std_error,
        large_uncertainty: g == 0.0 || std_error > LARGE_UNCERTAINTY * g,
        residual_rms_hz: rms,
        points: data.len(),
        g_sqrt_n: fixed.n_cav_uncertain.then(|| g * fixed.n_cav.sqrt()),
        seed,
    })
}

/// Reads a `detuning_Hz,omega_m_shift_Hz` table.
pub fn read_spring_table(input: impl Read) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(input);
    let header = reader
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    if header.iter().collect::<Vec<_>>() != ["detuning_Hz", "omega_m_shift_Hz"] {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header {SPRING_HEADER:?}"),
        });
    }
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let cell = |i: usize| -> Result<f64> {
            record
                .get(i)
                .ok_or_else(|| Error::Parse {
                    line,
                    message: "missing column".into(),
                })?
                .parse()
                .map_err(|_| Error::Parse {
                    line,
                    message: format!("non-numeric cell {:?}", &record[i]),
                })
        };
        out.push((cell(0)?, cell(1)?));
    }
    Ok(out)
}

pub fn write_spring_table(data: &[(f64, f64)], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["detuning_Hz", "omega_m_shift_Hz"])
        .map_err(csv_io)?;
    for &(d, s) in data {
        w.write_record([format!("{d:.16e}"), format!("{s:.16e}")])
            .map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_io(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}
