//! Taut-string model of the tensioned nanobeam pair.
//!
//! Each beam is a SiN string under tension S = σ·w·t, loaded on its side face
//! by the Casimir pressure over the centered metal segment. Bending stiffness
//! is neglected: with E ≈ 250 GPa the bending length √(EI/S) is about 1.2 μm,
//! so the relative correction 2√(EI/S)/L to f₁ and to the static deflection
//! stays below 1 % for L of a few hundred μm.
//!
//! The evaporated aluminium adds mass but no tension.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};

/// Geometry and material constants of one beam of the zipper pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviceGeometry {
    /// Overall string length, m. Informational; the mechanics use `effective_length`.
    pub string_length: f64,
    /// Length of the vibrating / deflecting section, m.
    pub effective_length: f64,
    pub width: f64,
    pub thickness: f64,
    pub metal_eff_thickness: f64,
    /// Centered metallised segment, m.
    pub metal_segment_length: f64,
    /// Height of the facing metal plate, m.
    pub plate_height: f64,
    pub gap: f64,
    pub film_stress: f64,
    pub density_sin: f64,
    pub density_al: f64,
}

/// Effective length at which the reference device's string model gives ≈950 kHz.
pub const DEFAULT_EFFECTIVE_LENGTH: f64 = 340e-6;

impl DeviceGeometry {
    /// The nominal 926 nm × 300 nm SiN device with a 220 μm × 350 nm Al plate at 100 nm gap.
    pub fn reference_device() -> Self {
        DeviceGeometry {
            string_length: 384e-6,
            effective_length: DEFAULT_EFFECTIVE_LENGTH,
            width: 926e-9,
            thickness: 300e-9,
            metal_eff_thickness: 18e-9,
            metal_segment_length: 220e-6,
            plate_height: 350e-9,
            gap: 100e-9,
            film_stress: 1.3e9,
            density_sin: 3100.0,
            density_al: 2700.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("string_length", self.string_length),
            ("effective_length", self.effective_length),
            ("width", self.width),
            ("thickness", self.thickness),
            ("plate_height", self.plate_height),
            ("gap", self.gap),
            ("film_stress", self.film_stress),
            ("density_sin", self.density_sin),
        ] {
            ensure_positive(name, v)?;
        }
        ensure_non_negative("metal_eff_thickness", self.metal_eff_thickness)?;
        ensure_non_negative("metal_segment_length", self.metal_segment_length)?;
        ensure_non_negative("density_al", self.density_al)?;
        if self.effective_length > self.string_length {
            return Err(Error::domain("effective_length exceeds string_length"));
        }
        if self.metal_segment_length > self.effective_length {
            return Err(Error::domain(
                "metal_segment_length exceeds effective_length",
            ));
        }
        Ok(())
    }

    fn sin_density_per_length(&self) -> f64 {
        self.density_sin * self.width * self.thickness
    }

    fn al_density_per_length(&self) -> f64 {
        self.density_al * self.metal_eff_thickness * self.plate_height
    }

    /// Linear mass density averaged over the effective length, kg/m.
    pub fn linear_density(&self) -> Result<f64> {
        self.validate()?;
        Ok(self.sin_density_per_length()
            + self.al_density_per_length() * self.metal_segment_length / self.effective_length)
    }
}

/// S = σ · w · t.
pub fn axial_tension(stress: f64, geometry: &DeviceGeometry) -> Result<f64> {
    ensure_positive("stress", stress)?;
    ensure_positive("width", geometry.width)?;
    ensure_positive("thickness", geometry.thickness)?;
    Ok(stress * geometry.width * geometry.thickness)
}

/// Static solution of −S w'' = q on `[x1, x2]`, w(0) = w(L) = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeflectionProfile {
    q: f64,
    x1: f64,
    x2: f64,
    length: f64,
    tension: f64,
    left_slope: f64,
    right_slope: f64,
}

impl DeflectionProfile {
    pub fn at(&self, x: f64) -> f64 {
        let s = self.tension;
        if x <= self.x1 {
            self.left_slope * x / s
        } else if x >= self.x2 {
            self.right_slope * (self.length - x) / s
        } else {
            let d = x - self.x1;
            (self.left_slope * x - 0.5 * self.q * d * d) / s
        }
    }

    pub fn midpoint(&self) -> f64 {
        self.at(0.5 * self.length)
    }

    /// Largest deflection, at the point where the shear vanishes.
    pub fn maximum(&self) -> f64 {
        if self.q == 0.0 {
            return 0.0;
        }
        self.at(self.x1 + self.left_slope / self.q)
    }
}

/// Deflection under a line load `q` (N/m) applied on `span`.
pub fn deflection_profile(
    q: f64,
    span: (f64, f64),
    length: f64,
    tension: f64,
) -> Result<DeflectionProfile> {
    ensure_positive("length", length)?;
    ensure_positive("tension", tension)?;
    if !q.is_finite() {
        return Err(Error::domain(format!("line load must be finite, got {q}")));
    }
    let (x1, x2) = span;
    if !(x1 >= 0.0 && x1 < x2 && x2 <= length) {
        return Err(Error::domain(format!(
            "load span [{x1}, {x2}] must satisfy 0 <= x1 < x2 <= L = {length}"
        )));
    }
    let force = q * (x2 - x1);
    let centroid = 0.5 * (x1 + x2);
    Ok(DeflectionProfile {
        q,
        x1,
        x2,
        length,
        tension,
        left_slope: force * (length - centroid) / length,
        right_slope: force * centroid / length,
    })
}

/// f₁ = (1/2L) √(S/μ) over the effective length.
pub fn fundamental_frequency(geometry: &DeviceGeometry) -> Result<f64> {
    let mu = geometry.linear_density()?;
    let s = axial_tension(geometry.film_stress, geometry)?;
    Ok((s / mu).sqrt() / (2.0 * geometry.effective_length))
}

/// Effective length giving fundamental frequency `f1`, keeping the metal segment fixed.
///
/// Solves 4f²μ_SiN L² + 4f²μ_Al c L − S = 0 for L.
pub fn effective_length_for_frequency(geometry: &DeviceGeometry, f1: f64) -> Result<f64> {
    ensure_positive("frequency", f1)?;
    let s = axial_tension(geometry.film_stress, geometry)?;
    let a = 4.0 * f1 * f1 * geometry.sin_density_per_length();
    let b = 4.0 * f1 * f1 * geometry.al_density_per_length() * geometry.metal_segment_length;
    ensure_positive("SiN linear density", a)?;
    Ok((-b + (b * b + 4.0 * a * s).sqrt()) / (2.0 * a))
}

/// k = m_eff (2π f₁)².
pub fn effective_stiffness(m_eff: f64, f1: f64) -> Result<f64> {
    ensure_positive("effective mass", m_eff)?;
    ensure_positive("frequency", f1)?;
    let omega = 2.0 * std::f64::consts::PI * f1;
    Ok(m_eff * omega * omega)
}

/// Modal stiffness of the ideal string fundamental, π²S/(2L), for modal mass μL/2.
pub fn string_modal_stiffness(tension: f64, length: f64) -> Result<f64> {
    ensure_positive("tension", tension)?;
    ensure_positive("length", length)?;
    Ok(std::f64::consts::PI.powi(2) * tension / (2.0 * length))
}

/// Ratio of the static full-span line stiffness qL/δ_mid = 8S/L to the modal
/// stiffness, after projecting the uniform load onto the sine mode (factor π/2).
/// Evaluates to 32/π³ ≈ 1.032 for an ideal string.
pub fn stiffness_consistency_factor(tension: f64, length: f64) -> Result<f64> {
    let profile = deflection_profile(1.0, (0.0, length), length, tension)?;
    let k_line = length / profile.midpoint();
    let k_modal = string_modal_stiffness(tension, length)?;
    Ok(k_line / (k_modal * std::f64::consts::FRAC_PI_2))
}

/// Per-beam line load from a side-face pressure, N/m.
pub fn line_load(pressure: f64, geometry: &DeviceGeometry) -> f64 {
    pressure * geometry.plate_height
}

/// Gap closing (m) caused by an attractive pressure on both beams: twice the
/// midpoint deflection of one beam.
pub fn pressure_to_gap_change(pressure: f64, geometry: &DeviceGeometry) -> Result<f64> {
    if !pressure.is_finite() {
        return Err(Error::domain(format!(
            "pressure must be finite, got {pressure}"
        )));
    }
    geometry.validate()?;
    let tension = axial_tension(geometry.film_stress, geometry)?;
    let l = geometry.effective_length;
    let c = geometry.metal_segment_length;
    if c == 0.0 {
        return Ok(0.0);
    }
    let profile = deflection_profile(
        line_load(pressure, geometry),
        (0.5 * (l - c), 0.5 * (l + c)),
        l,
        tension,
    )?;
    Ok(2.0 * profile.midpoint())
}

/// Pressure that closes the gap by `gap_change`; inverse of [`pressure_to_gap_change`].
pub fn gap_change_to_pressure(gap_change: f64, geometry: &DeviceGeometry) -> Result<f64> {
    let per_pascal = pressure_to_gap_change(1.0, geometry)?;
    if per_pascal == 0.0 {
        return Err(Error::domain("device has no metal segment to load"));
    }
    Ok(gap_change / per_pascal)
}

/// Derived mechanical figures for a device.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BeamMechanicsDerived {
    pub tension_n: f64,
    pub linear_density_kg_per_m: f64,
    pub f1_hz: f64,
    pub m_eff_kg: f64,
    pub k_eff_n_per_m: f64,
}

pub fn derive(geometry: &DeviceGeometry, m_eff: f64) -> Result<BeamMechanicsDerived> {
    let f1 = fundamental_frequency(geometry)?;
    Ok(BeamMechanicsDerived {
        tension_n: axial_tension(geometry.film_stress, geometry)?,
        linear_density_kg_per_m: geometry.linear_density()?,
        f1_hz: f1,
        m_eff_kg: m_eff,
        k_eff_n_per_m: effective_stiffness(m_eff, f1)?,
    })
}
