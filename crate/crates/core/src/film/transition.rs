use serde::Serialize;

use crate::error::{Error, Result};

const MIN_POINTS: usize = 10;
const MIN_SPAN_RATIO: f64 = 2.0;
/// Points stay on a plateau while within this fraction of R_normal of its median.
const PLATEAU_TOLERANCE: f64 = 0.05;
const PLATEAU_MIN_POINTS: usize = 3;
/// Interior plateaus must cover this fraction of the temperature span.
const PLATEAU_MIN_SPAN: f64 = 0.03;
const STEP_FRACTION: f64 = 0.25;

/// A four-point resistance curve with strictly increasing temperatures.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RTCurve {
    /// `(T [K], R [Ω])`, sorted by temperature.
    pub points: Vec<(f64, f64)>,
    pub current_a: Option<f64>,
    pub pulse_length_s: Option<f64>,
    pub pulse_delay_s: Option<f64>,
    /// Number of rows folded into another row with the same temperature.
    pub duplicates_merged: usize,
}

impl RTCurve {
    /// Sorts by temperature and averages rows that share a temperature.
    pub fn new(mut points: Vec<(f64, f64)>) -> Result<Self> {
        for &(t, r) in &points {
            if !t.is_finite() || t < 0.0 {
                return Err(Error::domain(format!(
                    "temperature must be finite and >= 0, got {t}"
                )));
            }
            if !r.is_finite() || r < 0.0 {
                return Err(Error::domain(format!(
                    "resistance must be finite and >= 0, got {r}"
                )));
            }
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(points.len());
        let mut duplicates = 0;
        let mut i = 0;
        while i < points.len() {
            let t = points[i].0;
            let mut j = i;
            let mut sum = 0.0;
            while j < points.len() && points[j].0 == t {
                sum += points[j].1;
                j += 1;
            }
            duplicates += j - i - 1;
            merged.push((t, sum / (j - i) as f64));
            i = j;
        }
        Ok(RTCurve {
            points: merged,
            current_a: None,
            pulse_length_s: None,
            pulse_delay_s: None,
            duplicates_merged: duplicates,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// One resistance drop between two plateaus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Step {
    #[serde(rename = "T_step_K")]
    pub t_step: f64,
    #[serde(rename = "R_before_ohm")]
    pub r_before: f64,
    #[serde(rename = "R_after_ohm")]
    pub r_after: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TcResult {
    /// Crossing of `threshold_fraction` times the resistance just above the
    /// final (lowest-temperature) step. Equals the plain crossing of
    /// `threshold_fraction · R_normal` for a single-step transition.
    #[serde(rename = "T_c_K")]
    pub t_c: f64,
    /// T(90 %) − T(10 %) of the final step.
    #[serde(rename = "transition_width_K")]
    pub transition_width: f64,
    #[serde(rename = "R_normal_ohm")]
    pub r_normal: f64,
    #[serde(rename = "R_residual_ohm")]
    pub r_residual: f64,
    pub steps: Vec<Step>,
    /// More than one step was found.
    pub multi_step: bool,
    /// Highest-temperature crossing of `threshold_fraction · R_normal`.
    #[serde(rename = "onset_crossing_K")]
    pub onset_crossing: f64,
    #[serde(rename = "threshold_fraction_dimensionless")]
    pub threshold_fraction: f64,
}

#[derive(Debug, Clone, Copy)]
struct Plateau {
    /// Indices into the descending-temperature arrays, inclusive.
    first: usize,
    last: usize,
    level: f64,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Greedy runs of points whose resistance stays within `tol` of the run median.
fn runs(r: &[f64], tol: impl Fn(f64) -> f64) -> Vec<Plateau> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < r.len() {
        let mut end = start;
        let mut level = r[start];
        while end + 1 < r.len() && (r[end + 1] - level).abs() <= tol(level) {
            end += 1;
            level = median(&mut r[start..=end].to_vec());
        }
        out.push(Plateau {
            first: start,
            last: end,
            level,
        });
        start = end + 1;
    }
    out
}

/// First crossing of `level` going down in temperature, searched from index `from`.
fn crossing(t: &[f64], r: &[f64], level: f64, from: usize) -> Option<f64> {
    (from..r.len().saturating_sub(1)).find_map(|i| {
        let (r0, r1) = (r[i], r[i + 1]);
        if r0 > level && r1 <= level {
            Some(t[i] + (level - r0) / (r1 - r0) * (t[i + 1] - t[i]))
        } else {
            None
        }
    })
}

/// Locates the superconducting transition of `curve`.
pub fn extract_tc(curve: &RTCurve, threshold_fraction: f64) -> Result<TcResult> {
    if !(threshold_fraction > 0.0 && threshold_fraction < 1.0) {
        return Err(Error::domain(format!(
            "threshold fraction must lie in (0, 1), got {threshold_fraction}"
        )));
    }
    if curve.len() < MIN_POINTS {
        return Err(Error::NoTransition(format!(
            "need at least {MIN_POINTS} points, got {}",
            curve.len()
        )));
    }
    let t: Vec<f64> = curve.points.iter().rev().map(|p| p.0).collect();
    let r: Vec<f64> = curve.points.iter().rev().map(|p| p.1).collect();
    let r_max = r.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let r_min = r.iter().copied().fold(f64::INFINITY, f64::min);
    if !(r_max > MIN_SPAN_RATIO * r_min) {
        return Err(Error::NoTransition(format!(
            "resistance varies only between {r_min} and {r_max} ohm"
        )));
    }

    let top = runs(&r, |level| PLATEAU_TOLERANCE * level)[0];
    if top.last + 1 < PLATEAU_MIN_POINTS {
        return Err(Error::NoTransition("no high-temperature plateau".into()));
    }
    let r_normal = top.level;
    let span = t[0] - t[t.len() - 1];
    let plateaus: Vec<Plateau> = std::iter::once(top)
        .chain(
            runs(&r[top.last + 1..], |_| PLATEAU_TOLERANCE * r_normal)
                .into_iter()
                .map(|p| Plateau {
                    first: p.first + top.last + 1,
                    last: p.last + top.last + 1,
                    ..p
                })
                .filter(|p| {
                    p.last - p.first + 1 >= PLATEAU_MIN_POINTS
                        && t[p.first] - t[p.last] >= PLATEAU_MIN_SPAN * span
                }),
        )
        .collect();

    let mut steps = Vec::new();
    let mut anchor = plateaus[0];
    let mut final_upper = anchor;
    for p in &plateaus[1..] {
        if anchor.level - p.level > STEP_FRACTION * r_normal {
            let mid = 0.5 * (anchor.level + p.level);
            let t_step = crossing(&t[..=p.first], &r[..=p.first], mid, anchor.last)
                .unwrap_or(0.5 * (t[anchor.last] + t[p.first]));
            steps.push(Step {
                t_step,
                r_before: anchor.level,
                r_after: p.level,
            });
            final_upper = anchor;
        }
        anchor = *p;
    }

    let lowest = plateaus[plateaus.len() - 1];
    let r_residual = if plateaus.len() > 1 && lowest.level < r_normal {
        lowest.level
    } else {
        r_min
    };
    if r_residual >= r_normal {
        return Err(Error::NoTransition(
            "residual resistance not below the normal state".into(),
        ));
    }

    let onset = crossing(&t, &r, threshold_fraction * r_normal, 0).ok_or_else(|| {
        Error::NoTransition(format!(
            "resistance never falls below {threshold_fraction} x R_normal"
        ))
    })?;
    let multi_step = steps.len() > 1;
    let (r_upper, from) = if multi_step {
        (final_upper.level, final_upper.last)
    } else {
        (r_normal, 0)
    };
    let t_c = crossing(&t, &r, threshold_fraction * r_upper, from)
        .ok_or_else(|| Error::NoTransition("final step never crosses the threshold".into()))?;

    let level = |f: f64| r_residual + f * (r_upper - r_residual);
    let width = match (
        crossing(&t, &r, level(0.9), from),
        crossing(&t, &r, level(0.1), from),
    ) {
        (Some(hi), Some(lo)) => (hi - lo).max(0.0),
        _ => 0.0,
    };

    Ok(TcResult {
        t_c,
        transition_width: width,
        r_normal,
        r_residual,
        steps,
        multi_step,
        onset_crossing: onset,
        threshold_fraction,
    })
}
