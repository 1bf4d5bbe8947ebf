//! Casimir pressure between parallel plates from the Lifshitz formula.
//!
//! At finite temperature the pressure is the Matsubara sum
//!
//! ```text
//! P(a,T) = (k_B T / π) Σ'_{n≥0} ∫ k dk κ_n Σ_{TE,TM} [ (r_a r_b)⁻¹ e^{2κ_n a} − 1 ]⁻¹
//! ```
//!
//! with κ_n = √(k² + ξ_n²/c²) and the n = 0 term at half weight. Each term is
//! integrated in y = 2κ_n a, which turns the measure into y²dy/(8a³) and makes
//! the integrand decay like e^{-y}; the integral is cut 60 e-folds above its
//! lower limit. Below [`ZERO_TEMPERATURE_THRESHOLD`] the sum is replaced by
//! (ħ/2π²)∫dξ, evaluated by Gauss–Legendre in ln ξ with node doubling.
//!
//! Pressures are returned as positive magnitudes for attraction.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{C, HBAR, K_B};
use crate::dielectric::MaterialModel;
use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::quadrature::{adaptive, GaussLegendre, Integral};

/// Temperatures below this (K) are evaluated with the T = 0 frequency integral.
pub const ZERO_TEMPERATURE_THRESHOLD: f64 = 1e-3;

/// Surface roughness of the evaporated Al films (m); gaps must exceed it.
pub const ROUGHNESS_SCALE: f64 = 5e-9;

/// Finite-size reduction preset for nanobeams relative to infinite plates
/// ("about an order of magnitude" from FDTD comparisons). Never applied implicitly.
pub const PFA_ETA_FDTD_PRESET: f64 = 0.1;

/// e-folds integrated above the lower limit of every y integral.
const Y_SPAN: f64 = 60.0;
const Y_BREAKS: [f64; 5] = [0.0, 2.0, 8.0, 20.0, Y_SPAN];
const MAX_PANELS: usize = 400;
/// Lower and upper ends of the dimensionless frequency t = 2aξ/c for the T = 0 integral.
const T_MIN: f64 = 1e-10;
const T_MAX: f64 = 80.0;

pub type MaterialPair = (MaterialModel, MaterialModel);

/// Numerical controls of the engine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LifshitzNumerics {
    pub rel_tol_quadrature: f64,
    pub rel_tol_series: f64,
    pub max_matsubara_terms: usize,
    pub t_zero_nodes: usize,
}

impl Default for LifshitzNumerics {
    fn default() -> Self {
        LifshitzNumerics {
            rel_tol_quadrature: 1e-9,
            rel_tol_series: 1e-7,
            max_matsubara_terms: 200_000,
            t_zero_nodes: 200,
        }
    }
}

impl LifshitzNumerics {
    pub fn validate(&self) -> Result<()> {
        for (name, tol) in [
            ("rel_tol_quadrature", self.rel_tol_quadrature),
            ("rel_tol_series", self.rel_tol_series),
        ] {
            if !(tol > 0.0 && tol < 1e-3) {
                return Err(Error::domain(format!(
                    "{name} must lie in (0, 1e-3), got {tol}"
                )));
            }
        }
        if self.max_matsubara_terms < 10 {
            return Err(Error::domain("max_matsubara_terms must be >= 10"));
        }
        if self.t_zero_nodes < 8 {
            return Err(Error::domain("t_zero_nodes must be >= 8"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Term-by-term Matsubara sum.
    Matsubara,
    /// Matsubara sum with the smooth tail summed by Euler–Maclaurin.
    MatsubaraEulerMaclaurin,
    ZeroTemperature,
}

/// Casimir pressure with convergence metadata. All pressures in Pa.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PressureResult {
    /// Attractive pressure magnitude.
    pub pressure: f64,
    /// Matsubara terms summed, or frequency nodes for the T = 0 branch.
    pub terms_used: usize,
    /// Estimated series truncation error (zero for the T = 0 branch).
    pub truncation_estimate: f64,
    /// Accumulated quadrature error estimate.
    pub quadrature_estimate: f64,
    pub branch: Branch,
}

/// Facing surfaces of the two metallized beams.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamFaceGeometry {
    pub face_height: f64,
    pub face_length: f64,
    pub gap: f64,
    /// Half-width of the uniform local-gap distribution.
    pub parallelism_jitter: f64,
}

impl BeamFaceGeometry {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("face_height", self.face_height)?;
        ensure_positive("face_length", self.face_length)?;
        ensure_positive("gap", self.gap)?;
        ensure_non_negative("parallelism_jitter", self.parallelism_jitter)?;
        if self.gap - self.parallelism_jitter <= ROUGHNESS_SCALE {
            return Err(Error::domain(format!(
                "smallest local gap {:.3e} m does not exceed the {ROUGHNESS_SCALE:.0e} m roughness scale",
                self.gap - self.parallelism_jitter
            )));
        }
        Ok(())
    }

    pub fn area(&self) -> f64 {
        self.face_height * self.face_length
    }
}

/// Proximity-force result for the beam pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PfaPressure {
    pub result: PressureResult,
    pub finite_size_factor: f64,
    /// Set when the gap exceeds the face height and PFA is of doubtful validity.
    pub advisory: Option<String>,
}

/// Casimir's ideal-conductor result π²ħc/(240 a⁴).
pub fn ideal_pressure_closed_form(gap: f64) -> Result<f64> {
    ensure_positive("gap", gap)?;
    Ok(PI * PI * HBAR * C / (240.0 * gap.powi(4)))
}

/// Plate response frozen at one imaginary frequency.
#[derive(Debug, Clone, Copy)]
enum Reflector {
    Ideal,
    /// ξ > 0 with finite permittivity.
    Finite {
        eps: f64,
    },
    /// ξ = 0: TM reflects fully, TE survives only through lossless carriers.
    Static {
        plasma_sq: f64,
    },
}

impl Reflector {
    fn new(model: &MaterialModel, xi: f64, temperature: f64) -> Result<Self> {
        if matches!(model, MaterialModel::IdealMetal) {
            return Ok(Reflector::Ideal);
        }
        if xi == 0.0 {
            Ok(Reflector::Static {
                plasma_sq: model.zero_frequency_plasma_sq(temperature)?,
            })
        } else {
            Ok(Reflector::Finite {
                eps: model.permittivity(xi, temperature)?,
            })
        }
    }

    /// (r_TE, r_TM) at transverse wavenumber k, with κ = √(k² + ξ²/c²).
    fn coefficients(&self, xi_over_c: f64, k: f64, kappa: f64) -> (f64, f64) {
        match *self {
            Reflector::Ideal => (-1.0, 1.0),
            Reflector::Static { plasma_sq } => {
                if plasma_sq == 0.0 {
                    (0.0, 1.0)
                } else {
                    let q2 = plasma_sq / (C * C);
                    let root = (k * k + q2).sqrt();
                    // (k − root)/(k + root) without cancellation
                    (-q2 / ((k + root) * (k + root)), 1.0)
                }
            }
            Reflector::Finite { eps } => {
                let excess = (eps - 1.0) * xi_over_c * xi_over_c;
                let kappa_m = (kappa * kappa + excess).sqrt();
                let te = -excess / ((kappa + kappa_m) * (kappa + kappa_m));
                let tm = (eps - 1.0) * ((eps + 1.0) * kappa * kappa - xi_over_c * xi_over_c)
                    / ((eps * kappa + kappa_m) * (eps * kappa + kappa_m));
                (te, tm)
            }
        }
    }
}

/// Imaginary-frequency Fresnel coefficients (r_TE, r_TM) of a half-space.
///
/// At ξ = 0 the analytic limits are used: r_TM = 1 for every metal, r_TE = −1
/// for the ideal metal, the plasma-sheet form for lossless carriers, and 0 for
/// a Drude metal with γ > 0. The two-fluid superconductor uses the plasma form
/// with ω_p² weighted by the superfluid fraction.
pub fn reflection_coefficients(
    model: &MaterialModel,
    xi: f64,
    k: f64,
    temperature: f64,
) -> Result<(f64, f64)> {
    ensure_positive("k", k)?;
    ensure_non_negative("xi", xi)?;
    let r = Reflector::new(model, xi, temperature)?;
    let xc = xi / C;
    Ok(r.coefficients(xc, k, (k * k + xc * xc).sqrt()))
}

/// ∫ y² Σ_p r r e^{-y}/(1 − r r e^{-y}) dy over y ∈ [2ξa/c, 2ξa/c + 60].
fn frequency_term(a: &Reflector, b: &Reflector, xi: f64, gap: f64, rel_tol: f64) -> Integral {
    let xc = xi / C;
    let y0 = 2.0 * xc * gap;
    let inv_2a = 0.5 / gap;
    let integrand = |y: f64| {
        let kappa = y * inv_2a;
        let k = (kappa * kappa - xc * xc).max(0.0).sqrt();
        let (te_a, tm_a) = a.coefficients(xc, k, kappa);
        let (te_b, tm_b) = b.coefficients(xc, k, kappa);
        let damp = (-y).exp();
        let mode = |rr: f64| {
            if rr == 0.0 {
                0.0
            } else if rr == 1.0 {
                damp / -(-y).exp_m1()
            } else {
                rr * damp / (1.0 - rr * damp)
            }
        };
        y * y * (mode(te_a * te_b) + mode(tm_a * tm_b))
    };
    let breaks = Y_BREAKS.map(|d| y0 + d);
    adaptive(integrand, &breaks, rel_tol, 0.0, MAX_PANELS)
}

fn validate_inputs(
    gap: f64,
    temperature: f64,
    mat_a: &MaterialModel,
    mat_b: &MaterialModel,
    num: &LifshitzNumerics,
) -> Result<()> {
    ensure_positive("gap", gap)?;
    ensure_non_negative("temperature", temperature)?;
    mat_a.validate()?;
    mat_b.validate()?;
    num.validate()
}

/// Parallel-plate Casimir pressure at gap `gap` (m) and temperature (K).
pub fn plate_pressure(
    gap: f64,
    temperature: f64,
    mat_a: &MaterialModel,
    mat_b: &MaterialModel,
    num: &LifshitzNumerics,
) -> Result<PressureResult> {
    validate_inputs(gap, temperature, mat_a, mat_b, num)?;
    if temperature < ZERO_TEMPERATURE_THRESHOLD {
        zero_temperature_pressure(gap, mat_a, mat_b, num)
    } else {
        matsubara_pressure(
            gap,
            temperature,
            mat_a,
            mat_b,
            num,
            SeriesOptions::default(),
        )
    }
}

/// How the Matsubara series is evaluated.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOptions {
    /// Weight of the n = 0 term; 0.5 is the physical value.
    pub zero_term_weight: f64,
    /// Disable the Euler–Maclaurin tail and sum term by term.
    pub force_direct: bool,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions {
            zero_term_weight: 0.5,
            force_direct: false,
        }
    }
}

/// Below this spacing 2ξ₁a/c between consecutive terms the direct sum would
/// need thousands of terms, and the smooth tail is summed by Euler–Maclaurin.
const DIRECT_SPACING_MIN: f64 = 0.02;
/// Terms summed exactly before the Euler–Maclaurin tail takes over.
const EM_FIRST_SPLIT: usize = 64;

/// Matsubara sum at T > 0; see [`SeriesOptions`].
#[doc(hidden)]
pub fn matsubara_pressure(
    gap: f64,
    temperature: f64,
    mat_a: &MaterialModel,
    mat_b: &MaterialModel,
    num: &LifshitzNumerics,
    opts: SeriesOptions,
) -> Result<PressureResult> {
    validate_inputs(gap, temperature, mat_a, mat_b, num)?;
    if temperature <= 0.0 {
        return Err(Error::domain("Matsubara sum needs T > 0"));
    }
    let series = MatsubaraSeries {
        gap,
        temperature,
        mat_a,
        mat_b,
        num,
        step: 2.0 * PI * K_B * temperature / HBAR,
    };
    let spacing = 2.0 * series.step * gap / C;
    if opts.force_direct || spacing >= DIRECT_SPACING_MIN {
        series.direct(opts.zero_term_weight)
    } else {
        series.euler_maclaurin(opts.zero_term_weight)
    }
}

struct MatsubaraSeries<'a> {
    gap: f64,
    temperature: f64,
    mat_a: &'a MaterialModel,
    mat_b: &'a MaterialModel,
    num: &'a LifshitzNumerics,
    /// ξ₁ in rad/s
    step: f64,
}

impl MatsubaraSeries<'_> {
    fn prefactor(&self) -> f64 {
        K_B * self.temperature / (PI * 8.0 * self.gap.powi(3))
    }

    /// Unweighted term g(x) at (possibly fractional) Matsubara index x.
    fn term(&self, x: f64) -> Result<Integral> {
        let xi = self.step * x;
        let ra = Reflector::new(self.mat_a, xi, self.temperature)?;
        let rb = Reflector::new(self.mat_b, xi, self.temperature)?;
        Ok(frequency_term(
            &ra,
            &rb,
            xi,
            self.gap,
            self.num.rel_tol_quadrature,
        ))
    }

    /// Term-by-term summation, stopped once three trailing terms and their
    /// geometric tail are all below rel_tol_series of the running sum.
    fn direct(&self, zero_weight: f64) -> Result<PressureResult> {
        let tol = self.num.rel_tol_series;
        let mut sum = 0.0;
        let mut quad_err = 0.0;
        let mut trailing = [f64::INFINITY; 3];
        let mut tail = f64::INFINITY;
        let mut terms = 0;
        for n in 0..self.num.max_matsubara_terms {
            let integral = self.term(n as f64)?;
            let weight = if n == 0 { zero_weight } else { 1.0 };
            let term = weight * integral.value;
            sum += term;
            quad_err += weight * integral.error;
            terms = n + 1;
            trailing = [trailing[1], trailing[2], term.abs()];
            if n >= 3 {
                tail = geometric_tail(&trailing);
                let bound = tol * sum.abs();
                if trailing.iter().all(|t| *t <= bound) && tail <= bound {
                    break;
                }
            }
        }
        let pre = self.prefactor();
        let result = PressureResult {
            pressure: pre * sum,
            terms_used: terms,
            truncation_estimate: pre * tail,
            quadrature_estimate: pre * quad_err,
            branch: Branch::Matsubara,
        };
        if !(tail <= tol * sum.abs()) {
            return Err(Error::NotConverged {
                partial: Box::new(result),
            });
        }
        Ok(result)
    }

    /// Exact sum of the first N terms plus
    /// Σ_{n≥N} g(n) ≈ ∫_N^∞ g dx + g(N)/2 − g'(N)/12 + g'''(N)/720,
    /// doubling N until the last correction is below rel_tol_series.
    fn euler_maclaurin(&self, zero_weight: f64) -> Result<PressureResult> {
        let tol = self.num.rel_tol_series;
        let pre = self.prefactor();
        let mut values: Vec<f64> = Vec::new();
        let mut errors: Vec<f64> = Vec::new();
        let mut split = EM_FIRST_SPLIT;
        loop {
            // g(0 ..= split + 2): the head plus the derivative stencil at `split`
            while values.len() < split + 3 {
                let r = self.term(values.len() as f64)?;
                values.push(r.value);
                errors.push(r.error);
            }
            let head = zero_weight * values[0] + values[1..split].iter().sum::<f64>();
            let head_err = zero_weight * errors[0] + errors[1..split].iter().sum::<f64>();
            let g = |i: isize| values[(split as isize + i) as usize];
            let d1 = (-g(2) + 8.0 * g(1) - 8.0 * g(-1) + g(-2)) / 12.0;
            let d3 = (g(2) - 2.0 * g(1) + 2.0 * g(-1) - g(-2)) / 2.0;
            let tail_integral = self.tail_integral(split as f64)?;
            let sum = head + tail_integral.value + 0.5 * g(0) - d1 / 12.0 + d3 / 720.0;
            let remainder = (d3 / 720.0).abs();
            let result = PressureResult {
                pressure: pre * sum,
                terms_used: values.len(),
                truncation_estimate: pre * remainder,
                quadrature_estimate: pre * (head_err + tail_integral.error),
                branch: Branch::MatsubaraEulerMaclaurin,
            };
            if remainder <= tol * sum.abs() {
                return Ok(result);
            }
            if 2 * split + 3 > self.num.max_matsubara_terms {
                return Err(Error::NotConverged {
                    partial: Box::new(result),
                });
            }
            split *= 2;
        }
    }

    /// ∫_N^∞ g(x) dx = (1/δ) ∫_{δN}^∞ J(t) dt with t = 2ξa/c = δx, evaluated
    /// adaptively in ln t.
    fn tail_integral(&self, from: f64) -> Result<Integral> {
        let delta = 2.0 * self.step * self.gap / C;
        let t0 = delta * from;
        if t0 >= T_MAX {
            return Ok(Integral {
                value: 0.0,
                error: 0.0,
                evaluations: 0,
            });
        }
        // materials were validated up front, so term() cannot fail here
        let integrand = |u: f64| {
            let t = u.exp();
            self.term(t / delta).map_or(f64::NAN, |r| t * r.value)
        };
        let (u0, u1) = (t0.ln(), T_MAX.ln());
        let breaks: Vec<f64> = (0..=8).map(|i| u0 + (u1 - u0) * i as f64 / 8.0).collect();
        let r = adaptive(
            integrand,
            &breaks,
            self.num.rel_tol_quadrature,
            0.0,
            MAX_PANELS,
        );
        if !r.value.is_finite() {
            return Err(Error::domain("non-finite Matsubara tail integral"));
        }
        Ok(Integral {
            value: r.value / delta,
            error: r.error / delta,
            evaluations: r.evaluations,
        })
    }
}

/// Remaining sum after the last of three trailing magnitudes, assuming
/// geometric decay at the slowest observed ratio.
fn geometric_tail(trailing: &[f64; 3]) -> f64 {
    let last = trailing[2];
    if last == 0.0 {
        return 0.0;
    }
    let ratio = (trailing[2] / trailing[1]).max(trailing[1] / trailing[0]);
    if ratio.is_finite() && ratio < 1.0 {
        last * ratio / (1.0 - ratio)
    } else {
        f64::INFINITY
    }
}

fn zero_temperature_pressure(
    gap: f64,
    mat_a: &MaterialModel,
    mat_b: &MaterialModel,
    num: &LifshitzNumerics,
) -> Result<PressureResult> {
    let coarse = zero_temperature_integral(gap, mat_a, mat_b, num, num.t_zero_nodes)?;
    let fine = zero_temperature_integral(gap, mat_a, mat_b, num, 2 * num.t_zero_nodes)?;
    // P = (ħ/2π²) ∫dξ (1/8a³) J,  ξ = c t / 2a
    let prefactor = HBAR * C / (2.0 * gap) / (2.0 * PI * PI) / (8.0 * gap.powi(3));
    Ok(PressureResult {
        pressure: prefactor * fine.0,
        terms_used: 2 * num.t_zero_nodes,
        truncation_estimate: 0.0,
        quadrature_estimate: prefactor * ((fine.0 - coarse.0).abs() + fine.1),
        branch: Branch::ZeroTemperature,
    })
}

/// ∫_0^∞ J(t) dt with t = e^u on [T_MIN, T_MAX]; the sliver below T_MIN is
/// taken as T_MIN·J(T_MIN). Returns (value, accumulated inner error).
fn zero_temperature_integral(
    gap: f64,
    mat_a: &MaterialModel,
    mat_b: &MaterialModel,
    num: &LifshitzNumerics,
    nodes: usize,
) -> Result<(f64, f64)> {
    let inner = |t: f64| -> Result<(f64, f64)> {
        let xi = t * C / (2.0 * gap);
        let ra = Reflector::new(mat_a, xi, 0.0)?;
        let rb = Reflector::new(mat_b, xi, 0.0)?;
        let r = frequency_term(&ra, &rb, xi, gap, num.rel_tol_quadrature);
        Ok((r.value, r.error))
    };
    let gl = GaussLegendre::new(nodes);
    let (u0, u1) = (T_MIN.ln(), T_MAX.ln());
    let (mid, half) = (0.5 * (u0 + u1), 0.5 * (u1 - u0));
    let mut value = 0.0;
    let mut error = 0.0;
    for (x, w) in gl.nodes.iter().zip(&gl.weights) {
        let t = (mid + half * x).exp();
        let (j, e) = inner(t)?;
        value += w * half * t * j;
        error += w * half * t * e;
    }
    let (j0, e0) = inner(T_MIN)?;
    Ok((value + T_MIN * j0, error + T_MIN * e0))
}

/// PFA pressure for the beam faces: the plate pressure averaged over a
/// uniform local-gap distribution gap ± jitter (8-point Gauss–Legendre), then
/// scaled by the finite-size factor η ∈ (0, 1].
pub fn beam_pfa_pressure(
    face: &BeamFaceGeometry,
    temperature: f64,
    mats: &MaterialPair,
    num: &LifshitzNumerics,
    finite_size_factor: f64,
) -> Result<PfaPressure> {
    face.validate()?;
    if !(finite_size_factor > 0.0 && finite_size_factor <= 1.0) {
        return Err(Error::domain(format!(
            "finite-size factor must lie in (0, 1], got {finite_size_factor}"
        )));
    }
    let advisory = (face.gap > face.face_height).then(|| {
        format!(
            "gap {:.3e} m exceeds face height {:.3e} m; proximity-force approximation is unreliable",
            face.gap, face.face_height
        )
    });
    let mut result = if face.parallelism_jitter == 0.0 {
        plate_pressure(face.gap, temperature, &mats.0, &mats.1, num)?
    } else {
        let gl = GaussLegendre::new(8);
        let mut acc = PressureResult {
            pressure: 0.0,
            terms_used: 0,
            truncation_estimate: 0.0,
            quadrature_estimate: 0.0,
            branch: Branch::Matsubara,
        };
        for (x, w) in gl.nodes.iter().zip(&gl.weights) {
            let local = face.gap + face.parallelism_jitter * x;
            let p = plate_pressure(local, temperature, &mats.0, &mats.1, num)?;
            let wt = 0.5 * w;
            acc.pressure += wt * p.pressure;
            acc.truncation_estimate += wt * p.truncation_estimate;
            acc.quadrature_estimate += wt * p.quadrature_estimate;
            acc.terms_used = acc.terms_used.max(p.terms_used);
            acc.branch = p.branch;
        }
        acc
    };
    result.pressure *= finite_size_factor;
    result.truncation_estimate *= finite_size_factor;
    result.quadrature_estimate *= finite_size_factor;
    Ok(PfaPressure {
        result,
        finite_size_factor,
        advisory,
    })
}

/// Signed difference P(pair) − P(reference) at one gap and temperature.
pub fn differential_pressure(
    gap: f64,
    temperature: f64,
    pair: &MaterialPair,
    reference: &MaterialPair,
    num: &LifshitzNumerics,
) -> Result<f64> {
    let p = plate_pressure(gap, temperature, &pair.0, &pair.1, num)?;
    let q = plate_pressure(gap, temperature, &reference.0, &reference.1, num)?;
    Ok(p.pressure - q.pressure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::ZETA_3;

    const WP: f64 = 2.24e16;
    const GAMMA: f64 = 1.24e14;
    const IDEAL: MaterialModel = MaterialModel::IdealMetal;

    fn num() -> LifshitzNumerics {
        LifshitzNumerics::default()
    }

    #[test]
    fn closed_form_values() {
        let p = ideal_pressure_closed_form(100e-9).unwrap();
        assert!((p - 13.001_257_72).abs() < 1e-7);
        let p1 = ideal_pressure_closed_form(1e-6).unwrap();
        assert!((p1 - 1.300_125_772e-3).abs() < 1e-12);
        let p2 = ideal_pressure_closed_form(200e-9).unwrap();
        assert!((p2 - p / 16.0).abs() < 1e-12 * p);
        assert!(ideal_pressure_closed_form(0.0).is_err());
    }

    #[test]
    fn ideal_reflection_is_perfect() {
        for xi in [0.0, 1e10, 1e16] {
            for k in [1.0, 1e7] {
                assert_eq!(
                    reflection_coefficients(&IDEAL, xi, k, 1.0).unwrap(),
                    (-1.0, 1.0)
                );
            }
        }
    }

    #[test]
    fn drude_te_zero_mode_vanishes() {
        let drude = MaterialModel::Drude {
            omega_p: WP,
            gamma: GAMMA,
        };
        for k in [1e3, 1e6, 1e9] {
            let (te, tm) = reflection_coefficients(&drude, 0.0, k, 1.0).unwrap();
            assert_eq!(te, 0.0);
            assert_eq!(tm, 1.0);
        }
        let plasma = MaterialModel::Plasma { omega_p: WP };
        let k = 5e6;
        let (te, _) = reflection_coefficients(&plasma, 0.0, k, 1.0).unwrap();
        let root = (k * k + (WP / C).powi(2)).sqrt();
        assert!((te - (k - root) / (k + root)).abs() < 1e-14);
    }

    #[test]
    fn vacuum_like_material_does_not_reflect() {
        let m = MaterialModel::Plasma { omega_p: 1e-3 };
        let (te, tm) = reflection_coefficients(&m, 1e12, 1e6, 1.0).unwrap();
        assert!(te.abs() < 1e-20 && tm.abs() < 1e-20);
    }

    #[test]
    fn reflection_bounded() {
        let models = [
            MaterialModel::Plasma { omega_p: WP },
            MaterialModel::Drude {
                omega_p: WP,
                gamma: GAMMA,
            },
            MaterialModel::SuperconductorTwoFluid {
                omega_p: WP,
                gamma: GAMMA,
                t_c: 0.9,
            },
        ];
        for m in models {
            for xi in [0.0, 1e9, 1e13, 1e16, 1e19] {
                for k in [1e2, 1e6, 1e8, 1e10] {
                    let (te, tm) = reflection_coefficients(&m, xi, k, 0.3).unwrap();
                    assert!(te.abs() <= 1.0 && tm.abs() <= 1.0, "{m:?} {xi} {k}");
                }
            }
        }
        assert!(reflection_coefficients(&IDEAL, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn two_fluid_zero_mode_interpolates() {
        let sc = MaterialModel::SuperconductorTwoFluid {
            omega_p: WP,
            gamma: GAMMA,
            t_c: 0.9,
        };
        let k = 5e6;
        let (te_cold, _) = reflection_coefficients(&sc, 0.0, k, 0.0).unwrap();
        let (te_plasma, _) =
            reflection_coefficients(&MaterialModel::Plasma { omega_p: WP }, 0.0, k, 0.0).unwrap();
        assert_eq!(te_cold, te_plasma);
        let (te_warm, _) = reflection_coefficients(&sc, 0.0, k, 0.9).unwrap();
        assert_eq!(te_warm, 0.0);
        let (te_mid, _) = reflection_coefficients(&sc, 0.0, k, 0.6).unwrap();
        assert!(te_mid < 0.0 && te_mid > te_plasma);
    }

    #[test]
    fn zero_temperature_ideal_matches_closed_form() {
        let p = plate_pressure(100e-9, 0.0, &IDEAL, &IDEAL, &num()).unwrap();
        let exact = ideal_pressure_closed_form(100e-9).unwrap();
        assert_eq!(p.branch, Branch::ZeroTemperature);
        assert!((p.pressure - exact).abs() / exact < 1e-8, "{p:?}");
        assert!(p.quadrature_estimate < 1e-6 * exact);
    }

    #[test]
    fn low_temperature_sum_approaches_zero_temperature_integral() {
        // at 50 mK and 100 nm thermal corrections to ideal plates are ~1e-9
        let p = plate_pressure(100e-9, 0.05, &IDEAL, &IDEAL, &num()).unwrap();
        let exact = ideal_pressure_closed_form(100e-9).unwrap();
        assert_eq!(p.branch, Branch::MatsubaraEulerMaclaurin);
        assert!(
            (p.pressure - exact).abs() / exact < 1e-6,
            "{p:?} vs {exact}"
        );
        assert!(p.truncation_estimate <= num().rel_tol_series * p.pressure);
    }

    #[test]
    fn classical_limit_of_ideal_plates() {
        // n = 0 of an ideal metal: (k_B T/π)/(8a³)·½·2·Γ(3)ζ(3) = k_B T ζ(3)/(4π a³)
        let a = 1e-6;
        let t = 20.0 * HBAR * C / (2.0 * a) / K_B;
        let p = plate_pressure(a, t, &IDEAL, &IDEAL, &num()).unwrap();
        let classical = K_B * t * ZETA_3 / (4.0 * PI * a.powi(3));
        assert!(
            (p.pressure - classical).abs() / classical < 1e-6,
            "{p:?} vs {classical}"
        );
    }

    #[test]
    fn zero_term_weight_bookkeeping() {
        let a = 1e-6;
        let t = 20.0 * HBAR * C / (2.0 * a) / K_B;
        let opts = |w| SeriesOptions {
            zero_term_weight: w,
            force_direct: false,
        };
        let half = matsubara_pressure(a, t, &IDEAL, &IDEAL, &num(), opts(0.5)).unwrap();
        let full = matsubara_pressure(a, t, &IDEAL, &IDEAL, &num(), opts(1.0)).unwrap();
        let classical = K_B * t * ZETA_3 / (4.0 * PI * a.powi(3));
        assert!(((full.pressure - half.pressure) - classical).abs() / classical < 1e-6);
    }

    #[test]
    fn plasma_exceeds_drude() {
        let plasma = MaterialModel::Plasma { omega_p: WP };
        let drude = MaterialModel::Drude {
            omega_p: WP,
            gamma: GAMMA,
        };
        let d =
            differential_pressure(100e-9, 1.0, &(plasma, plasma), &(drude, drude), &num()).unwrap();
        assert!(d > 0.0);
    }

    #[test]
    fn identical_pairs_give_zero_difference() {
        let drude = MaterialModel::Drude {
            omega_p: WP,
            gamma: GAMMA,
        };
        let d =
            differential_pressure(150e-9, 0.5, &(drude, drude), &(drude, drude), &num()).unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn two_fluid_at_tc_equals_drude() {
        let sc = MaterialModel::SuperconductorTwoFluid {
            omega_p: WP,
            gamma: GAMMA,
            t_c: 0.9,
        };
        let drude = MaterialModel::Drude {
            omega_p: WP,
            gamma: GAMMA,
        };
        let n = num();
        let p = plate_pressure(100e-9, 0.9, &drude, &drude, &n).unwrap();
        let d = differential_pressure(100e-9, 0.9, &(sc, sc), &(drude, drude), &n).unwrap();
        assert!(d.abs() <= n.rel_tol_series * p.pressure);
    }

    #[test]
    fn pfa_degenerate_and_linear() {
        let face = BeamFaceGeometry {
            face_height: 350e-9,
            face_length: 220e-6,
            gap: 100e-9,
            parallelism_jitter: 0.0,
        };
        let pair = (IDEAL, IDEAL);
        let n = num();
        let plate = plate_pressure(100e-9, 0.0, &IDEAL, &IDEAL, &n).unwrap();
        let pfa = beam_pfa_pressure(&face, 0.0, &pair, &n, 1.0).unwrap();
        assert_eq!(pfa.result.pressure, plate.pressure);
        assert!(pfa.advisory.is_none());
        let scaled = beam_pfa_pressure(&face, 0.0, &pair, &n, PFA_ETA_FDTD_PRESET).unwrap();
        assert_eq!(scaled.result.pressure, 0.1 * pfa.result.pressure);
        assert!(beam_pfa_pressure(&face, 0.0, &pair, &n, 0.0).is_err());
        assert!(beam_pfa_pressure(&face, 0.0, &pair, &n, 1.5).is_err());
    }

    #[test]
    fn pfa_jitter_raises_pressure() {
        let face = BeamFaceGeometry {
            face_height: 350e-9,
            face_length: 220e-6,
            gap: 100e-9,
            parallelism_jitter: 10e-9,
        };
        let n = num();
        let pfa = beam_pfa_pressure(&face, 0.0, &(IDEAL, IDEAL), &n, 1.0).unwrap();
        // Simpson's rule over the uniform distribution as an independent estimate
        let p = |g: f64| ideal_pressure_closed_form(g).unwrap();
        let simpson = (p(90e-9) + 4.0 * p(100e-9) + p(110e-9)) / 6.0;
        assert!(pfa.result.pressure > p(100e-9));
        assert!((pfa.result.pressure - simpson).abs() / simpson < 2e-3);
        // exact uniform average of a⁻⁴
        let exact = (90e-9f64.powi(-3) - 110e-9f64.powi(-3)) / (3.0 * 20e-9) * p(1.0);
        assert!((pfa.result.pressure - exact).abs() / exact < 1e-6);
    }

    #[test]
    fn pfa_advisory_for_wide_gaps() {
        let face = BeamFaceGeometry {
            face_height: 350e-9,
            face_length: 220e-6,
            gap: 400e-9,
            parallelism_jitter: 0.0,
        };
        let pfa = beam_pfa_pressure(&face, 0.0, &(IDEAL, IDEAL), &num(), 1.0).unwrap();
        assert!(pfa.advisory.is_some());
    }

    #[test]
    fn rejects_bad_inputs() {
        let n = num();
        assert!(matches!(
            plate_pressure(0.0, 1.0, &IDEAL, &IDEAL, &n),
            Err(Error::Domain(_))
        ));
        assert!(plate_pressure(-1e-7, 1.0, &IDEAL, &IDEAL, &n).is_err());
        assert!(plate_pressure(1e-7, -1.0, &IDEAL, &IDEAL, &n).is_err());
        let bad = LifshitzNumerics {
            rel_tol_series: 1e-2,
            ..n
        };
        assert!(plate_pressure(1e-7, 1.0, &IDEAL, &IDEAL, &bad).is_err());
        let few = LifshitzNumerics {
            max_matsubara_terms: 5,
            ..n
        };
        assert!(plate_pressure(1e-7, 1.0, &IDEAL, &IDEAL, &few).is_err());
    }

    #[test]
    fn euler_maclaurin_tail_matches_direct_sum() {
        // spacing 2ξ₁a/c ≈ 0.011 here, so direct summation needs ~3000 terms
        let drude = MaterialModel::Drude {
            omega_p: WP,
            gamma: GAMMA,
        };
        let sc = MaterialModel::SuperconductorTwoFluid {
            omega_p: WP,
            gamma: GAMMA,
            t_c: 0.9,
        };
        let n = num();
        for m in [IDEAL, drude, sc] {
            let em = plate_pressure(200e-9, 10.0, &m, &m, &n).unwrap();
            assert_eq!(em.branch, Branch::MatsubaraEulerMaclaurin);
            let opts = SeriesOptions {
                force_direct: true,
                ..Default::default()
            };
            let direct = matsubara_pressure(200e-9, 10.0, &m, &m, &n, opts).unwrap();
            assert_eq!(direct.branch, Branch::Matsubara);
            let rel = (em.pressure - direct.pressure).abs() / direct.pressure;
            assert!(rel < 1e-6, "{m:?}: {rel:e} {em:?} {direct:?}");
        }
    }

    #[test]
    fn too_few_terms_reports_partial_result() {
        let n = LifshitzNumerics {
            max_matsubara_terms: 10,
            ..num()
        };
        let opts = SeriesOptions {
            force_direct: true,
            ..Default::default()
        };
        match matsubara_pressure(100e-9, 0.1, &IDEAL, &IDEAL, &n, opts) {
            Err(Error::NotConverged { partial }) => {
                assert_eq!(partial.terms_used, 10);
                assert!(partial.pressure > 0.0);
            }
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }
}
