//! The `casimir` command-line front end.
//!
//! Exit codes: 0 success, 1 physics error (domain, convergence, no
//! transition, ill-conditioned fit), 2 usage or configuration error.
//! Results go to stdout; errors and warnings go to stderr.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{DeviceConfig, SweepFile};
use crate::designer::{
    detectability_report, run_gap_sweep, scan_table, simulate_temperature_scan, verdict_table,
    Chain, LabeledPair, ScanTheory, SweepSpec,
};
use crate::dielectric::MaterialModel;
use crate::error::{Error, Result};
use crate::film::{
    conductivity_from_four_point, dirty_limit_lengths, extract_tc, ingest_rt_table, mean_free_path,
    DirtyLimitLengths, RTCurve, TcResult,
};
use crate::io::{write_record, Format};
use crate::lifshitz::{plate_pressure, LifshitzNumerics, PressureResult};
use crate::mechanics::{derive, effective_length_for_frequency, BeamMechanicsDerived};
use crate::readout::{
    fit_gom, intracavity_photons, read_spring_table, GomFit, PressureFloor, SpringFixed,
    Transduction,
};
use crate::units::{parse_quantity, Dimension};

fn quantity(dim: Dimension) -> impl Fn(&str) -> std::result::Result<f64, String> + Clone {
    move |s| parse_quantity(s, dim).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "casimir",
    version,
    about = "Casimir pressure and readout chain for superconducting nanobeam devices"
)]
pub struct Cli {
    /// Output format. Defaults to JSON for single records and CSV for tables.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for every random draw (bootstrap error estimates).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ConfigArg {
    /// Device configuration file (TOML, unit-suffixed keys).
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Casimir pressure between two plates.
    Pressure {
        /// Plate separation with unit, e.g. 100nm.
        #[arg(long, value_parser = quantity(Dimension::Length))]
        gap: f64,
        /// Temperature with unit, e.g. 10mK, 1.2K or 0.
        #[arg(long, value_parser = quantity(Dimension::Temperature))]
        temp: f64,
        /// Material of plate A: `ideal`, or a name from [materials] in --config.
        #[arg(long)]
        model_a: String,
        /// Material of plate B.
        #[arg(long)]
        model_b: String,
        /// Device configuration providing material definitions and numerics.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Gap sweep table.
    Sweep {
        #[command(flatten)]
        config: ConfigArg,
        /// Sweep file (TOML with gap_min_<unit>, gap_max_<unit>, gap_step_<unit>,
        /// temperatures_<unit> and pairs).
        #[arg(long)]
        spec: PathBuf,
        /// Worker threads; 0 uses all cores. Output does not depend on it.
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Predicted cavity shift along a temperature ramp, relative to the hottest point.
    Scan {
        #[command(flatten)]
        config: ConfigArg,
        /// Lowest temperature with unit, e.g. 10mK.
        #[arg(long, value_parser = quantity(Dimension::Temperature))]
        tmin: f64,
        /// Highest temperature with unit, e.g. 1.5K.
        #[arg(long, value_parser = quantity(Dimension::Temperature))]
        tmax: f64,
        /// Number of evenly spaced temperatures.
        #[arg(long, default_value_t = 50)]
        points: usize,
        /// Material name for both plates, or `gravitational` for the step below T_c.
        /// Defaults to [scan] theory.
        #[arg(long)]
        theory: Option<String>,
        /// Reference material for both plates. Defaults to [scan] reference.
        #[arg(long)]
        reference: Option<String>,
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Mean free path, coherence length and penetration depth of the film.
    Film {
        #[command(flatten)]
        config: ConfigArg,
        /// 4 K conductivity in S_per_m, e.g. 4.1e7S_per_m.
        #[arg(long, value_parser = quantity(Dimension::Conductivity), conflicts_with = "r4k")]
        sigma: Option<f64>,
        /// 4 K four-point resistance with unit, e.g. 850ohm.
        #[arg(long, value_parser = quantity(Dimension::Resistance))]
        r4k: Option<f64>,
        /// Temperature for the exact (temperature-dependent) forms, e.g. 100mK.
        #[arg(long, value_parser = quantity(Dimension::Temperature), default_value = "0")]
        temp: f64,
    },
    /// Transition temperature from a `temperature_K,resistance_ohm` CSV file.
    Tc {
        #[arg(long)]
        input: PathBuf,
        /// Fraction of the normal resistance defining T_c.
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
    },
    /// Gap change, cavity shift and PDH voltage caused by a pressure.
    Transduce {
        #[command(flatten)]
        config: ConfigArg,
        /// Attractive pressure with unit, e.g. 0.5Pa or 6mPa.
        #[arg(long, value_parser = quantity(Dimension::Pressure))]
        pressure: f64,
    },
    /// Detectability verdicts against the pressure floor.
    Detect {
        #[command(flatten)]
        config: ConfigArg,
        /// Named signal `name=<pressure>`, e.g. grav=0.5Pa. Repeatable. Without any,
        /// the gravitational stub and the [scan] theory-minus-reference differential are used.
        #[arg(long = "signal")]
        signals: Vec<String>,
    },
    /// Fit g_OM to an optical-spring dataset (`detuning_Hz,omega_m_shift_Hz`).
    FitGom {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        input: PathBuf,
        /// Intracavity photon number. Without it n_cav is estimated from
        /// [operating] spring_input_power at zero detuning and flagged uncertain.
        #[arg(long)]
        n_cav: Option<f64>,
    },
    /// Check a configuration file and print derived parameters.
    Validate {
        #[command(flatten)]
        config: ConfigArg,
    },
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_usage() {
        2
    } else {
        1
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn warn(err: &mut dyn Write, msg: impl std::fmt::Display) {
    let _ = writeln!(err, "warning: {msg}");
}

fn load(config: &ConfigArg) -> Result<DeviceConfig> {
    DeviceConfig::from_path(&config.config)
}

fn chain(c: &DeviceConfig) -> Chain {
    Chain {
        geometry: c.geometry,
        cavity: c.cavity,
        calib: c.readout,
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Config(vec![format!("{}: {e}", path.display())]))
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let record_format = cli.format.unwrap_or(Format::Json);
    let table_format = cli.format.unwrap_or(Format::Csv);
    match &cli.command {
        Command::Pressure {
            gap,
            temp,
            model_a,
            model_b,
            config,
        } => {
            let cfg = config.as_deref().map(DeviceConfig::from_path).transpose()?;
            let resolve = |name: &str| -> Result<MaterialModel> {
                match &cfg {
                    Some(c) if c.materials.contains_key(name) => c.material(name),
                    _ if name == "ideal" => Ok(MaterialModel::IdealMetal),
                    Some(c) => c.material(name),
                    None => Err(Error::Config(vec![format!(
                        "material {name:?} needs --config with a [materials.{name}] entry (only `ideal` is built in)"
                    )])),
                }
            };
            let (a, b) = (resolve(model_a)?, resolve(model_b)?);
            let num = cfg
                .as_ref()
                .map_or_else(LifshitzNumerics::default, |c| c.numerics);
            let result = plate_pressure(*gap, *temp, &a, &b, &num)?;
            #[derive(Serialize)]
            struct Report<'a> {
                gap_m: f64,
                temperature_k: f64,
                model_a: &'a str,
                model_b: &'a str,
                #[serde(flatten)]
                result: PressureResult,
            }
            let report = Report {
                gap_m: *gap,
                temperature_k: *temp,
                model_a,
                model_b,
                result,
            };
            write_record(&report, record_format, out)
        }
        Command::Sweep {
            config,
            spec,
            threads,
        } => {
            let c = load(config)?;
            let file = SweepFile::from_path(spec)?;
            let pairs = file
                .pairs
                .iter()
                .map(|label| {
                    Ok(LabeledPair {
                        label: label.clone(),
                        pair: c.pair(label)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let spec = SweepSpec {
                gap_min: file.gap_min,
                gap_max: file.gap_max,
                gap_step: file.gap_step,
                temperatures: file.temperatures,
                pairs,
            };
            let table = run_gap_sweep(&spec, &chain(&c), &c.numerics, *threads)?;
            for row in table.rows.iter().filter(|r| r.error.is_some()) {
                warn(
                    err,
                    format!(
                        "gap {:.3e} m, T {} K, {}: {}",
                        row.gap_m,
                        row.temperature_k,
                        row.pair,
                        row.error.as_deref().unwrap_or_default()
                    ),
                );
            }
            table.to_table().write(table_format, out)
        }
        Command::Scan {
            config,
            tmin,
            tmax,
            points,
            theory,
            reference,
            threads,
        } => {
            let c = load(config)?;
            if !(tmin <= tmax) || *points < 2 {
                return Err(Error::Config(vec![
                    "need tmin <= tmax and --points >= 2".into()
                ]));
            }
            let grid: Vec<f64> = (0..*points)
                .map(|i| tmin + (tmax - tmin) * i as f64 / (*points - 1) as f64)
                .collect();
            let theory_name = theory.clone().unwrap_or_else(|| c.scan.theory.clone());
            let scan_theory = if theory_name == "gravitational" {
                ScanTheory::StepBelowTc {
                    pressure: c.scan.gravitational_pressure,
                    t_c: c.film.t_c,
                }
            } else {
                let reference = reference
                    .clone()
                    .unwrap_or_else(|| c.scan.reference.clone());
                ScanTheory::Lifshitz {
                    theory: c.pair(&theory_name)?,
                    reference: c.pair(&reference)?,
                    gap: c.geometry.gap,
                }
            };
            let trace =
                simulate_temperature_scan(&chain(&c), &grid, &scan_theory, &c.numerics, *threads)?;
            scan_table(&trace).write(table_format, out)
        }
        Command::Film {
            config,
            sigma,
            r4k,
            temp,
        } => {
            let c = load(config)?;
            let sigma = match (sigma, r4k) {
                (Some(s), _) => *s,
                (None, Some(r)) => conductivity_from_four_point(c.film.wire_length, c.film.cross_section, *r)?,
                (None, None) => match (c.film_sigma_4k, c.film_r_4k) {
                    (Some(s), _) => s,
                    (None, Some(r)) => conductivity_from_four_point(c.film.wire_length, c.film.cross_section, r)?,
                    (None, None) => {
                        return Err(Error::Config(vec![
                            "no 4 K conductivity: pass --sigma or --r4k, or set sigma_4k / r_4k in [film]".into(),
                        ]))
                    }
                },
            };
            let ell = mean_free_path(sigma, c.film.rho_ell)?;
            #[derive(Serialize)]
            struct FilmReport {
                sigma_4k_s_per_m: f64,
                rho_ell_ohm_m2: f64,
                computed: DirtyLimitLengths,
                quoted: Option<DirtyLimitLengths>,
                mean_free_path_discrepancy: Option<String>,
            }
            let quoted = c
                .film_quoted_mean_free_path
                .map(|q| dirty_limit_lengths(&c.film, q, *temp))
                .transpose()?;
            let discrepancy = c.film_quoted_mean_free_path.and_then(|q| {
                let rel = (ell - q).abs() / q;
                (rel > 0.01).then(|| {
                    format!(
                        "sigma x rho_ell gives {:.2} nm but the quoted mean free path is {:.2} nm ({:+.0} %); both are reported",
                        ell * 1e9,
                        q * 1e9,
                        100.0 * (ell - q) / q
                    )
                })
            });
            if let Some(d) = &discrepancy {
                warn(err, d);
            }
            let report = FilmReport {
                sigma_4k_s_per_m: sigma,
                rho_ell_ohm_m2: c.film.rho_ell,
                computed: dirty_limit_lengths(&c.film, ell, *temp)?,
                quoted,
                mean_free_path_discrepancy: discrepancy,
            };
            write_record(&report, record_format, out)
        }
        Command::Tc { input, threshold } => {
            let curve: RTCurve = ingest_rt_table(open(input)?)?;
            if curve.duplicates_merged > 0 {
                warn(
                    err,
                    format!(
                        "{} duplicated temperature rows averaged",
                        curve.duplicates_merged
                    ),
                );
            }
            let result: TcResult = extract_tc(&curve, *threshold)?;
            write_record(&result, record_format, out)
        }
        Command::Transduce { config, pressure } => {
            let c = load(config)?;
            let t: Transduction = chain(&c).transduce(*pressure)?;
            if t.pdh_clamped {
                warn(
                    err,
                    "frequency shift exceeds the linear PDH window (kappa/4); voltage clamped",
                );
            }
            write_record(&t, record_format, out)
        }
        Command::Detect { config, signals } => {
            let c = load(config)?;
            let list = if signals.is_empty() {
                default_signals(&c)?
            } else {
                signals
                    .iter()
                    .map(|s| {
                        let (name, value) = s.split_once('=').ok_or_else(|| {
                            Error::Config(vec![format!("signal {s:?} must look like name=0.5Pa")])
                        })?;
                        Ok((
                            name.to_string(),
                            parse_quantity(value, Dimension::Pressure)?,
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            let verdicts = detectability_report(&list, &chain(&c))?;
            verdict_table(&verdicts).write(table_format, out)
        }
        Command::FitGom {
            config,
            input,
            n_cav,
        } => {
            let c = load(config)?;
            let data = read_spring_table(open(input)?)?;
            let (n, uncertain) = match n_cav {
                Some(n) => (*n, false),
                None => {
                    let p = c.operating.spring_input_power_w.ok_or_else(|| {
                        Error::Config(vec![
                            "pass --n-cav or set spring_input_power_<unit> in [operating]".into(),
                        ])
                    })?;
                    (intracavity_photons(p, 0.0, &c.cavity)?, true)
                }
            };
            let omega_m =
                2.0 * std::f64::consts::PI * crate::mechanics::fundamental_frequency(&c.geometry)?;
            let fixed = SpringFixed {
                n_cav: n,
                m_eff: c.m_eff,
                omega_m,
                kappa: c.cavity.kappa,
                n_cav_uncertain: uncertain,
            };
            let fit: GomFit = fit_gom(&data, &fixed, cli.seed)?;
            if fit.large_uncertainty {
                warn(err, "g_OM is poorly constrained by this dataset");
            }
            write_record(&fit, record_format, out)
        }
        Command::Validate { config } => {
            let c = load(config)?;
            let warnings = c.cavity.consistency_warnings();
            for w in &warnings {
                warn(err, w);
            }
            #[derive(Serialize)]
            struct Validation {
                ok: bool,
                warnings: Vec<String>,
                mechanics: BeamMechanicsDerived,
                effective_length_for_950_khz_m: f64,
                q_o_from_kappa: f64,
                floor: PressureFloor,
                materials: Vec<String>,
            }
            let report = Validation {
                ok: true,
                warnings,
                mechanics: derive(&c.geometry, c.m_eff)?,
                effective_length_for_950_khz_m: effective_length_for_frequency(&c.geometry, 950e3)?,
                q_o_from_kappa: c.cavity.omega_c() / c.cavity.kappa,
                floor: chain(&c).floor()?,
                materials: c.materials.keys().cloned().collect(),
            };
            write_record(&report, record_format, out)
        }
    }
}

/// The gravitational stub plus the [scan] theory-minus-reference differential
/// at the configured gap and detection temperature.
pub fn default_signals(c: &DeviceConfig) -> Result<Vec<(String, f64)>> {
    let theory = c.pair(&c.scan.theory)?;
    let reference = c.pair(&c.scan.reference)?;
    let t = c.scan.detect_temperature;
    let p = plate_pressure(c.geometry.gap, t, &theory.0, &theory.1, &c.numerics)?.pressure;
    let q = plate_pressure(c.geometry.gap, t, &reference.0, &reference.1, &c.numerics)?.pressure;
    Ok(vec![
        (
            "gravitational_casimir".to_string(),
            c.scan.gravitational_pressure,
        ),
        (
            format!("{}_minus_{}", c.scan.theory, c.scan.reference),
            p - q,
        ),
    ])
}
