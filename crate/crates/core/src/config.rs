//! Device and sweep configuration files (TOML).
//!
//! Every numeric key carries a unit suffix (`gap_nm`, `kappa_GHz`,
//! `q_o_dimensionless`); unsuffixed numbers and unknown keys are rejected and
//! all problems in a file are reported together. Angular quantities
//! (κ, κ_e, g_OM, ω_p, γ) may be given in cyclic units, which are converted
//! with a factor 2π.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Serialize;
use toml::{Table, Value};

use crate::dielectric::MaterialModel;
use crate::error::{Error, Result};
use crate::film::FilmParams;
use crate::lifshitz::{LifshitzNumerics, MaterialPair};
use crate::mechanics::DeviceGeometry;
use crate::readout::{CavityParams, ReadoutCalibration};
use crate::units::{split_key, Dimension};

/// Reads quantities from one TOML table, remembering which keys were used.
struct Section<'a> {
    name: String,
    table: &'a Table,
    used: BTreeSet<String>,
    errors: Vec<String>,
}

impl<'a> Section<'a> {
    fn new(name: impl Into<String>, table: &'a Table) -> Self {
        Section {
            name: name.into(),
            table,
            used: BTreeSet::new(),
            errors: Vec::new(),
        }
    }

    fn find(&mut self, stem: &str, dim: Dimension) -> Option<(String, &'a Value, f64)> {
        let matches: Vec<_> = self
            .table
            .iter()
            .filter_map(|(k, v)| match split_key(k, dim) {
                Some((s, factor)) if s == stem => Some((k.clone(), v, factor)),
                _ => None,
            })
            .collect();
        for m in &matches {
            self.used.insert(m.0.clone());
        }
        if matches.len() > 1 {
            let keys: Vec<_> = matches.iter().map(|m| m.0.as_str()).collect();
            self.errors.push(format!(
                "[{}] {stem} given more than once: {}",
                self.name,
                keys.join(", ")
            ));
            return None;
        }
        matches.into_iter().next()
    }

    fn number(&mut self, key: &str, value: &Value) -> Option<f64> {
        match value {
            Value::Integer(i) => Some(*i as f64),
            Value::Float(f) if f.is_finite() => Some(*f),
            _ => {
                self.errors
                    .push(format!("[{}] {key} must be a number", self.name));
                None
            }
        }
    }

    fn optional(&mut self, stem: &str, dim: Dimension) -> Option<f64> {
        let (key, value, factor) = self.find(stem, dim)?;
        self.number(&key, value).map(|v| v * factor)
    }

    fn required(&mut self, stem: &str, dim: Dimension) -> f64 {
        if let Some((key, value, factor)) = self.find(stem, dim) {
            return self.number(&key, value).map_or(f64::NAN, |v| v * factor);
        }
        self.errors.push(format!(
            "[{}] missing {stem}_<unit> (units: {})",
            self.name,
            dim.unit_list()
        ));
        f64::NAN
    }

    fn list(&mut self, stem: &str, dim: Dimension) -> Option<Vec<f64>> {
        let (key, value, factor) = self.find(stem, dim)?;
        let Value::Array(items) = value else {
            self.errors
                .push(format!("[{}] {key} must be an array", self.name));
            return None;
        };
        let mut out = Vec::with_capacity(items.len());
        for item in items {
            out.push(self.number(&key, item)? * factor);
        }
        Some(out)
    }

    fn string(&mut self, key: &str, required: bool) -> Option<String> {
        self.used.insert(key.to_string());
        match self.table.get(key) {
            Some(Value::String(s)) => Some(s.clone()),
            Some(_) => {
                self.errors
                    .push(format!("[{}] {key} must be a string", self.name));
                None
            }
            None => {
                if required {
                    self.errors.push(format!("[{}] missing {key}", self.name));
                }
                None
            }
        }
    }

    fn strings(&mut self, key: &str) -> Option<Vec<String>> {
        self.used.insert(key.to_string());
        match self.table.get(key) {
            Some(Value::Array(items)) if items.iter().all(Value::is_str) => Some(
                items
                    .iter()
                    .filter_map(|v| v.as_str().map(String::from))
                    .collect(),
            ),
            Some(_) => {
                self.errors
                    .push(format!("[{}] {key} must be an array of strings", self.name));
                None
            }
            None => None,
        }
    }

    fn finish(mut self, errors: &mut Vec<String>) {
        for key in self.table.keys() {
            if !self.used.contains(key) {
                self.errors
                    .push(format!("[{}] unknown key {key}", self.name));
            }
        }
        errors.append(&mut self.errors);
    }
}

fn subtable<'a>(
    root: &'a Table,
    name: &str,
    required: bool,
    errors: &mut Vec<String>,
) -> Option<&'a Table> {
    match root.get(name) {
        Some(Value::Table(t)) => Some(t),
        Some(_) => {
            errors.push(format!("{name} must be a table"));
            None
        }
        None => {
            if required {
                errors.push(format!("missing section [{name}]"));
            }
            None
        }
    }
}

fn parse_document(text: &str) -> Result<Table> {
    text.parse::<Table>()
        .map_err(|e| Error::Config(vec![e.to_string()]))
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Config(vec![format!("{}: {e}", path.display())]))
}

/// What the temperature scan compares and the injected reference signal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSettings {
    pub theory: String,
    pub reference: String,
    /// Magnitude of the gravitational-Casimir stub switched on below T_c, Pa.
    pub gravitational_pressure: f64,
    /// Coldest temperature used for theory differentials in `detect`, K.
    pub detect_temperature: f64,
}

/// Annotations about the optical operating point; not used in the physics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatingPoint {
    pub input_power_w: Option<f64>,
    pub breakdown_power_w: Option<f64>,
    pub spring_input_power_w: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviceConfig {
    pub geometry: DeviceGeometry,
    pub m_eff: f64,
    pub cavity: CavityParams,
    pub readout: ReadoutCalibration,
    pub film: FilmParams,
    /// Four-point resistance at 4 K, Ω.
    pub film_r_4k: Option<f64>,
    /// Measured 4 K conductivity, (Ω·m)⁻¹; takes precedence over `film_r_4k`.
    pub film_sigma_4k: Option<f64>,
    /// Externally quoted mean free path, m, reported next to the computed one.
    pub film_quoted_mean_free_path: Option<f64>,
    pub materials: BTreeMap<String, MaterialModel>,
    pub scan: ScanSettings,
    pub operating: OperatingPoint,
    pub numerics: LifshitzNumerics,
}

impl DeviceConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml(&read_file(path)?)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let root = parse_document(text)?;
        let mut errors = Vec::new();
        let empty = Table::new();
        use Dimension::*;

        let t = subtable(&root, "geometry", true, &mut errors).unwrap_or(&empty);
        let mut s = Section::new("geometry", t);
        let geometry = DeviceGeometry {
            string_length: s.required("string_length", Length),
            effective_length: s.required("effective_length", Length),
            width: s.required("width", Length),
            thickness: s.required("thickness", Length),
            metal_eff_thickness: s.required("metal_eff_thickness", Length),
            metal_segment_length: s.required("metal_segment_length", Length),
            plate_height: s.required("plate_height", Length),
            gap: s.required("gap", Length),
            film_stress: s.required("film_stress", Pressure),
            density_sin: s.required("density_sin", Density),
            density_al: s.required("density_al", Density),
        };
        let m_eff = s.required("m_eff", Mass);
        s.finish(&mut errors);

        let t = subtable(&root, "cavity", true, &mut errors).unwrap_or(&empty);
        let mut s = Section::new("cavity", t);
        let cavity = CavityParams {
            lambda_res: s.required("lambda_res", Length),
            kappa: s.required("kappa", AngularFrequency),
            kappa_e: s.required("kappa_e", AngularFrequency),
            q_o: s.required("q_o", Dimensionless),
            g_om: s.required("g_om", AngularCoupling),
        };
        s.finish(&mut errors);

        let t = subtable(&root, "readout", true, &mut errors).unwrap_or(&empty);
        let mut s = Section::new("readout", t);
        let readout = ReadoutCalibration {
            pdh_slope: s.required("pdh_slope", VoltsPerHertz),
            min_resolvable_shift: s.required("min_resolvable_shift", Frequency),
            drift_bound: s.required("drift_bound", Frequency),
        };
        s.finish(&mut errors);

        let t = subtable(&root, "film", true, &mut errors).unwrap_or(&empty);
        let mut s = Section::new("film", t);
        let film = FilmParams {
            xi0: s.required("xi0", Length),
            lambda_l: s.required("lambda_l", Length),
            rho_ell: s.required("rho_ell", ResistivityLength),
            wire_length: s.required("wire_length", Length),
            cross_section: s.required("cross_section", Area),
            t_c: s.required("t_c", Temperature),
        };
        let film_r_4k = s.optional("r_4k", Resistance);
        let film_sigma_4k = s.optional("sigma_4k", Conductivity);
        let film_quoted_mean_free_path = s.optional("quoted_mean_free_path", Length);
        s.finish(&mut errors);

        let mut materials = BTreeMap::new();
        if let Some(t) = subtable(&root, "materials", true, &mut errors) {
            for (name, value) in t {
                let Value::Table(mt) = value else {
                    errors.push(format!("[materials] {name} must be a table"));
                    continue;
                };
                if let Some(m) = read_material(name, mt, &mut errors) {
                    materials.insert(name.clone(), m);
                }
            }
        }

        let t = subtable(&root, "scan", true, &mut errors).unwrap_or(&empty);
        let mut s = Section::new("scan", t);
        let scan = ScanSettings {
            theory: s.string("theory", true).unwrap_or_default(),
            reference: s.string("reference", true).unwrap_or_default(),
            gravitational_pressure: s.required("gravitational_pressure", Pressure),
            detect_temperature: s.required("detect_temperature", Temperature),
        };
        s.finish(&mut errors);
        for name in [&scan.theory, &scan.reference] {
            if !name.is_empty() && !materials.contains_key(name) {
                errors.push(format!("[scan] unknown material {name:?}"));
            }
        }

        let t = subtable(&root, "operating", false, &mut errors).unwrap_or(&empty);
        let mut s = Section::new("operating", t);
        let operating = OperatingPoint {
            input_power_w: s.optional("input_power", Power),
            breakdown_power_w: s.optional("breakdown_power", Power),
            spring_input_power_w: s.optional("spring_input_power", Power),
        };
        s.finish(&mut errors);

        let numerics = match subtable(&root, "numerics", false, &mut errors) {
            Some(t) => read_numerics(t, &mut errors),
            None => LifshitzNumerics::default(),
        };

        for (key, _) in root.iter() {
            if ![
                "geometry",
                "cavity",
                "readout",
                "film",
                "materials",
                "scan",
                "operating",
                "numerics",
            ]
            .contains(&key.as_str())
            {
                errors.push(format!("unknown section [{key}]"));
            }
        }

        if errors.is_empty() {
            let checks: [(&str, Result<()>); 4] = [
                ("geometry", geometry.validate()),
                ("cavity", cavity.validate()),
                ("readout", readout.validate()),
                ("film", film.validate()),
            ];
            for (name, r) in checks {
                if let Err(e) = r {
                    errors.push(format!("[{name}] {e}"));
                }
            }
            if !(m_eff > 0.0) {
                errors.push("[geometry] m_eff must be > 0".into());
            }
            if let Err(e) = numerics.validate() {
                errors.push(format!("[numerics] {e}"));
            }
        }
        if !errors.is_empty() {
            return Err(Error::Config(errors));
        }
        Ok(DeviceConfig {
            geometry,
            m_eff,
            cavity,
            readout,
            film,
            film_r_4k,
            film_sigma_4k,
            film_quoted_mean_free_path,
            materials,
            scan,
            operating,
            numerics,
        })
    }

    pub fn material(&self, name: &str) -> Result<MaterialModel> {
        self.materials.get(name).copied().ok_or_else(|| {
            Error::Config(vec![format!(
                "unknown material {name:?}; defined: {}",
                self.materials
                    .keys()
                    .cloned()
                    .collect::<Vec<_>>()
                    .join(", ")
            )])
        })
    }

    /// Resolves `"a/b"` (or a single name for a symmetric pair).
    pub fn pair(&self, spec: &str) -> Result<MaterialPair> {
        match spec.split_once('/') {
            Some((a, b)) => Ok((self.material(a.trim())?, self.material(b.trim())?)),
            None => {
                let m = self.material(spec.trim())?;
                Ok((m, m))
            }
        }
    }
}

fn read_material(name: &str, table: &Table, errors: &mut Vec<String>) -> Option<MaterialModel> {
    use Dimension::*;
    let mut s = Section::new(format!("materials.{name}"), table);
    let model = s.string("model", true);
    let m = match model.as_deref() {
        Some("ideal") => Some(MaterialModel::IdealMetal),
        Some("plasma") => Some(MaterialModel::Plasma {
            omega_p: s.required("omega_p", AngularFrequency),
        }),
        Some("drude") => Some(MaterialModel::Drude {
            omega_p: s.required("omega_p", AngularFrequency),
            gamma: s.required("gamma", AngularFrequency),
        }),
        Some("two_fluid") => Some(MaterialModel::SuperconductorTwoFluid {
            omega_p: s.required("omega_p", AngularFrequency),
            gamma: s.required("gamma", AngularFrequency),
            t_c: s.required("t_c", Temperature),
        }),
        Some(other) => {
            s.errors.push(format!(
                "[materials.{name}] unknown model {other:?} (ideal, plasma, drude, two_fluid)"
            ));
            None
        }
        None => None,
    };
    // description strings are allowed for provenance notes
    s.string("source", false);
    let before = errors.len();
    s.finish(errors);
    let m = m?;
    if errors.len() > before {
        return None;
    }
    if let Err(e) = m.validate() {
        errors.push(format!("[materials.{name}] {e}"));
        return None;
    }
    Some(m)
}

fn read_numerics(table: &Table, errors: &mut Vec<String>) -> LifshitzNumerics {
    let d = LifshitzNumerics::default();
    let mut s = Section::new("numerics", table);
    let n = LifshitzNumerics {
        rel_tol_quadrature: s
            .optional("rel_tol_quadrature", Dimension::Dimensionless)
            .unwrap_or(d.rel_tol_quadrature),
        rel_tol_series: s
            .optional("rel_tol_series", Dimension::Dimensionless)
            .unwrap_or(d.rel_tol_series),
        max_matsubara_terms: s
            .optional("max_matsubara_terms", Dimension::Dimensionless)
            .map_or(d.max_matsubara_terms, |v| v as usize),
        t_zero_nodes: s
            .optional("t_zero_nodes", Dimension::Dimensionless)
            .map_or(d.t_zero_nodes, |v| v as usize),
    };
    s.finish(errors);
    n
}

/// Gap sweep request; material pairs are names resolved against a [`DeviceConfig`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepFile {
    pub gap_min: f64,
    pub gap_max: f64,
    pub gap_step: f64,
    pub temperatures: Vec<f64>,
    pub pairs: Vec<String>,
}

impl SweepFile {
    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml(&read_file(path)?)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let root = parse_document(text)?;
        let mut errors = Vec::new();
        let empty = Table::new();
        let t = subtable(&root, "sweep", true, &mut errors).unwrap_or(&empty);
        let mut s = Section::new("sweep", t);
        let spec = SweepFile {
            gap_min: s.required("gap_min", Dimension::Length),
            gap_max: s.required("gap_max", Dimension::Length),
            gap_step: s.required("gap_step", Dimension::Length),
            temperatures: s
                .list("temperatures", Dimension::Temperature)
                .unwrap_or_else(|| {
                    s.errors
                        .push("[sweep] missing temperatures_<unit> array".into());
                    Vec::new()
                }),
            pairs: s.strings("pairs").unwrap_or_else(|| {
                s.errors.push("[sweep] missing pairs".into());
                Vec::new()
            }),
        };
        s.finish(&mut errors);
        for key in root.keys().filter(|k| k.as_str() != "sweep") {
            errors.push(format!("unknown section [{key}]"));
        }
        if errors.is_empty() {
            Ok(spec)
        } else {
            Err(Error::Config(errors))
        }
    }
}
