//! Gap sweeps, simulated temperature scans through T_c and detectability
//! verdicts, built on the Lifshitz engine and the readout chain.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::Table;
use crate::lifshitz::{plate_pressure, LifshitzNumerics, MaterialPair};
use crate::mechanics::DeviceGeometry;
use crate::readout::{
    min_detectable_pressure, transduce, CavityParams, PressureFloor, ReadoutCalibration,
    Transduction,
};

/// Device plus readout: everything needed to turn a pressure into a signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Chain {
    pub geometry: DeviceGeometry,
    pub cavity: CavityParams,
    pub calib: ReadoutCalibration,
}

impl Chain {
    pub fn floor(&self) -> Result<PressureFloor> {
        min_detectable_pressure(&self.geometry, &self.cavity, &self.calib)
    }

    pub fn transduce(&self, pressure: f64) -> Result<Transduction> {
        transduce(pressure, &self.geometry, &self.cavity, &self.calib)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabeledPair {
    pub label: String,
    pub pair: MaterialPair,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub gap_min: f64,
    pub gap_max: f64,
    pub gap_step: f64,
    pub temperatures: Vec<f64>,
    pub pairs: Vec<LabeledPair>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.gap_min > 0.0 && self.gap_min <= self.gap_max && self.gap_max.is_finite()) {
            return Err(Error::domain(format!(
                "need 0 < gap_min <= gap_max, got {} and {}",
                self.gap_min, self.gap_max
            )));
        }
        if !(self.gap_step > 0.0 && self.gap_step.is_finite()) {
            return Err(Error::domain(format!(
                "gap_step must be > 0, got {}",
                self.gap_step
            )));
        }
        if self
            .temperatures
            .iter()
            .any(|t| !(t.is_finite() && *t >= 0.0))
        {
            return Err(Error::domain("temperatures must be finite and >= 0"));
        }
        for p in &self.pairs {
            p.pair.0.validate()?;
            p.pair.1.validate()?;
        }
        Ok(())
    }

    /// gap_min, gap_min + step, … up to gap_max (inclusive within 1e-9 of a step).
    pub fn gaps(&self) -> Vec<f64> {
        let n = ((self.gap_max - self.gap_min) / self.gap_step + 1e-9).floor() as usize;
        (0..=n)
            .map(|i| self.gap_min + i as f64 * self.gap_step)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub gap_m: f64,
    pub temperature_k: f64,
    pub pair_index: usize,
    pub pair: String,
    pub pressure_pa: Option<f64>,
    pub gap_change_m: Option<f64>,
    pub freq_shift_hz: Option<f64>,
    pub pdh_voltage_v: Option<f64>,
    pub margin: Option<f64>,
    pub detectable: Option<bool>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub floor_pa: f64,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&[
            "gap_m",
            "temperature_K",
            "pair_index",
            "pair",
            "pressure_Pa",
            "gap_change_m",
            "freq_shift_Hz",
            "pdh_voltage_V",
            "margin",
            "detectable",
            "error",
        ]);
        for r in &self.rows {
            t.push(vec![
                r.gap_m.into(),
                r.temperature_k.into(),
                r.pair_index.into(),
                r.pair.clone().into(),
                r.pressure_pa.into(),
                r.gap_change_m.into(),
                r.freq_shift_hz.into(),
                r.pdh_voltage_v.into(),
                r.margin.into(),
                r.detectable.into(),
                r.error.clone().into(),
            ]);
        }
        t
    }
}

/// Runs `f` on a pool of `threads` workers (0 = rayon default).
fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Contract(format!("cannot build thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Plate pressure and its readout for every (gap, T, pair), ordered
/// lexicographically by (gap, T, pair index) whatever the thread count.
pub fn run_gap_sweep(
    spec: &SweepSpec,
    chain: &Chain,
    num: &LifshitzNumerics,
    threads: usize,
) -> Result<SweepTable> {
    spec.validate()?;
    num.validate()?;
    let floor = chain.floor()?.pressure_pa;
    let jobs: Vec<(f64, f64, usize)> = spec
        .gaps()
        .into_iter()
        .flat_map(|g| {
            spec.temperatures
                .iter()
                .flat_map(move |&t| (0..spec.pairs.len()).map(move |i| (g, t, i)))
        })
        .collect();
    let rows = in_pool(threads, || {
        jobs.par_iter()
            .map(|&(gap, temperature, i)| {
                let lp = &spec.pairs[i];
                let mut row = SweepRow {
                    gap_m: gap,
                    temperature_k: temperature,
                    pair_index: i,
                    pair: lp.label.clone(),
                    pressure_pa: None,
                    gap_change_m: None,
                    freq_shift_hz: None,
                    pdh_voltage_v: None,
                    margin: None,
                    detectable: None,
                    error: None,
                };
                let outcome = plate_pressure(gap, temperature, &lp.pair.0, &lp.pair.1, num)
                    .and_then(|p| Ok((p.pressure, chain.transduce(p.pressure)?)));
                match outcome {
                    Ok((p, tr)) => {
                        let margin = p.abs() / floor;
                        row.pressure_pa = Some(p);
                        row.gap_change_m = Some(tr.gap_change_m);
                        row.freq_shift_hz = Some(tr.freq_shift_hz);
                        row.pdh_voltage_v = Some(tr.pdh_voltage_v);
                        row.margin = Some(margin);
                        row.detectable = Some(margin >= 1.0);
                    }
                    Err(e) => row.error = Some(e.to_string()),
                }
                row
            })
            .collect()
    })?;
    Ok(SweepTable {
        floor_pa: floor,
        rows,
    })
}

/// What a temperature scan compares.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ScanTheory {
    /// P_theory(T) − P_reference(T) at a fixed gap.
    Lifshitz {
        theory: MaterialPair,
        reference: MaterialPair,
        gap: f64,
    },
    /// An externally supplied pressure switched on below T_c.
    StepBelowTc { pressure: f64, t_c: f64 },
}

impl ScanTheory {
    fn differential(&self, temperature: f64, num: &LifshitzNumerics) -> Result<f64> {
        match self {
            ScanTheory::Lifshitz {
                theory,
                reference,
                gap,
            } => {
                let p = plate_pressure(*gap, temperature, &theory.0, &theory.1, num)?;
                let q = plate_pressure(*gap, temperature, &reference.0, &reference.1, num)?;
                Ok(p.pressure - q.pressure)
            }
            ScanTheory::StepBelowTc { pressure, t_c } => {
                Ok(if temperature < *t_c { *pressure } else { 0.0 })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanPoint {
    pub temperature_k: f64,
    /// Differential pressure relative to the hottest grid point, Pa.
    pub differential_pa: f64,
    pub gap_change_m: f64,
    pub freq_shift_hz: f64,
    /// Resolvable-shift band (±), Hz.
    pub resolution_hz: f64,
    /// Drift band (±), Hz.
    pub drift_bound_hz: f64,
}

/// Predicted cavity shift along `t_grid`, relative to the hottest grid point.
pub fn simulate_temperature_scan(
    chain: &Chain,
    t_grid: &[f64],
    theory: &ScanTheory,
    num: &LifshitzNumerics,
    threads: usize,
) -> Result<Vec<ScanPoint>> {
    if t_grid.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::domain("scan temperatures must be finite and >= 0"));
    }
    let Some(&t_base) = t_grid.iter().max_by(|a, b| a.total_cmp(b)) else {
        return Ok(Vec::new());
    };
    let diffs: Vec<f64> = in_pool(threads, || {
        t_grid
            .par_iter()
            .map(|&t| theory.differential(t, num))
            .collect::<Result<Vec<_>>>()
    })??;
    let base = theory.differential(t_base, num)?;
    t_grid
        .iter()
        .zip(diffs)
        .map(|(&t, d)| {
            let rel = d - base;
            let tr = chain.transduce(rel)?;
            Ok(ScanPoint {
                temperature_k: t,
                differential_pa: rel,
                gap_change_m: tr.gap_change_m,
                freq_shift_hz: tr.freq_shift_hz,
                resolution_hz: chain.calib.min_resolvable_shift,
                drift_bound_hz: chain.calib.drift_bound,
            })
        })
        .collect()
}

pub fn scan_table(points: &[ScanPoint]) -> Table {
    let mut t = Table::new(&[
        "temperature_K",
        "differential_Pa",
        "gap_change_m",
        "freq_shift_Hz",
        "resolution_Hz",
        "drift_bound_Hz",
    ]);
    for p in points {
        t.push(vec![
            p.temperature_k.into(),
            p.differential_pa.into(),
            p.gap_change_m.into(),
            p.freq_shift_hz.into(),
            p.resolution_hz.into(),
            p.drift_bound_hz.into(),
        ]);
    }
    t
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectabilityVerdict {
    pub name: String,
    pub signal_pa: f64,
    pub floor_pa: f64,
    pub freq_shift_hz: f64,
    pub detectable: bool,
    /// |signal| / floor.
    pub margin: f64,
}

/// Compares each named pressure differential with the chain's pressure floor.
pub fn detectability_report(
    signals: &[(String, f64)],
    chain: &Chain,
) -> Result<Vec<DetectabilityVerdict>> {
    let floor = chain.floor()?.pressure_pa;
    signals
        .iter()
        .map(|(name, signal)| {
            if !signal.is_finite() {
                return Err(Error::domain(format!("signal {name} is not finite")));
            }
            let margin = signal.abs() / floor;
            Ok(DetectabilityVerdict {
                name: name.clone(),
                signal_pa: *signal,
                floor_pa: floor,
                freq_shift_hz: chain.transduce(signal.abs())?.freq_shift_hz,
                detectable: margin >= 1.0,
                margin,
            })
        })
        .collect()
}

pub fn verdict_table(verdicts: &[DetectabilityVerdict]) -> Table {
    let mut t = Table::new(&[
        "name",
        "signal_Pa",
        "floor_Pa",
        "freq_shift_Hz",
        "margin",
        "detectable",
    ]);
    for v in verdicts {
        t.push(vec![
            v.name.clone().into(),
            v.signal_pa.into(),
            v.floor_pa.into(),
            v.freq_shift_hz.into(),
            v.margin.into(),
            v.detectable.into(),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dielectric::MaterialModel;
    use crate::lifshitz::ideal_pressure_closed_form;

    const WP: f64 = 2.24e16;
    const GAMMA: f64 = 1.24e14;

    fn chain() -> Chain {
        Chain {
            geometry: DeviceGeometry::reference_device(),
            cavity: CavityParams::reference_device(),
            calib: ReadoutCalibration::reference_device(),
        }
    }

    fn ideal() -> LabeledPair {
        LabeledPair {
            label: "ideal/ideal".into(),
            pair: (MaterialModel::IdealMetal, MaterialModel::IdealMetal),
        }
    }

    #[test]
    fn default_gap_grid() {
        let spec = SweepSpec {
            gap_min: 100e-9,
            gap_max: 300e-9,
            gap_step: 10e-9,
            temperatures: vec![],
            pairs: vec![],
        };
        assert_eq!(spec.gaps().len(), 21);
        let t = run_gap_sweep(&spec, &chain(), &LifshitzNumerics::default(), 2).unwrap();
        assert!(t.rows.is_empty());
    }

    #[test]
    fn single_ideal_row() {
        let spec = SweepSpec {
            gap_min: 100e-9,
            gap_max: 100e-9,
            gap_step: 10e-9,
            temperatures: vec![0.0],
            pairs: vec![ideal()],
        };
        let t = run_gap_sweep(&spec, &chain(), &LifshitzNumerics::default(), 1).unwrap();
        assert_eq!(t.rows.len(), 1);
        let p = t.rows[0].pressure_pa.unwrap();
        assert!((p - ideal_pressure_closed_form(100e-9).unwrap()).abs() < 1e-6 * p);
        assert!((p - 13.00).abs() < 0.005);
        assert_eq!(t.rows[0].detectable, Some(true));
    }

    #[test]
    fn row_errors_do_not_abort() {
        let spec = SweepSpec {
            gap_min: 100e-9,
            gap_max: 110e-9,
            gap_step: 10e-9,
            temperatures: vec![0.0, 2000.0],
            pairs: vec![ideal()],
        };
        let num = LifshitzNumerics {
            max_matsubara_terms: 10,
            ..Default::default()
        };
        let t = run_gap_sweep(&spec, &chain(), &num, 2).unwrap();
        assert_eq!(t.rows.len(), 4);
        assert!(t.rows.iter().any(|r| r.error.is_some()));
        assert!(t.rows.iter().any(|r| r.error.is_none()));
    }

    #[test]
    fn gravitational_step() {
        let theory = ScanTheory::StepBelowTc {
            pressure: 0.5,
            t_c: 0.9,
        };
        let grid: Vec<f64> = (0..=15).map(|i| 0.1 * i as f64).collect();
        let trace =
            simulate_temperature_scan(&chain(), &grid, &theory, &LifshitzNumerics::default(), 1)
                .unwrap();
        let cold = trace[0].freq_shift_hz;
        let hot = trace[15].freq_shift_hz;
        assert_eq!(hot, 0.0);
        assert!(
            cold.abs() > 1.5e9 / 3.0 && cold.abs() < 1.5e9 * 3.0,
            "{cold}"
        );
    }

    #[test]
    fn identical_models_give_flat_trace() {
        let al = MaterialModel::Drude {
            omega_p: WP,
            gamma: GAMMA,
        };
        let theory = ScanTheory::Lifshitz {
            theory: (al, al),
            reference: (al, al),
            gap: 100e-9,
        };
        let trace = simulate_temperature_scan(
            &chain(),
            &[0.2, 0.6, 1.2],
            &theory,
            &LifshitzNumerics::default(),
            2,
        )
        .unwrap();
        assert!(trace.iter().all(|p| p.freq_shift_hz == 0.0));
    }

    #[test]
    fn verdict_boundaries() {
        let c = chain();
        let floor = c.floor().unwrap().pressure_pa;
        let v = detectability_report(
            &[
                ("floor".into(), floor),
                ("grav".into(), 0.5),
                ("tiny".into(), 1e-3),
            ],
            &c,
        )
        .unwrap();
        assert!(v[0].detectable && v[0].margin == 1.0);
        assert!(v[1].detectable && v[1].margin > 40.0 && v[1].margin < 170.0);
        assert!(!v[2].detectable);
    }
}
