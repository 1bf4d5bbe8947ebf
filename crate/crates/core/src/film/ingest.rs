use std::io::Read;

use super::RTCurve;
use crate::error::{Error, Result};

pub const RT_HEADER: &str = "temperature_K,resistance_ohm";

fn parse_error(line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Reads `# key = value` metadata comments (`current_A`, `pulse_length_s`,
/// `pulse_delay_s`); other comments are ignored.
fn metadata(text: &str, curve: &mut RTCurve) -> Result<()> {
    for (idx, line) in text.lines().enumerate() {
        let Some(body) = line.trim().strip_prefix('#') else {
            continue;
        };
        let Some((key, value)) = body.split_once('=') else {
            continue;
        };
        let slot = match key.trim() {
            "current_A" => &mut curve.current_a,
            "pulse_length_s" => &mut curve.pulse_length_s,
            "pulse_delay_s" => &mut curve.pulse_delay_s,
            _ => continue,
        };
        let v: f64 = value.trim().parse().map_err(|_| {
            parse_error(
                idx as u64 + 1,
                format!("bad metadata value {:?}", value.trim()),
            )
        })?;
        *slot = Some(v);
    }
    Ok(())
}

/// Parses a `temperature_K,resistance_ohm` CSV table into a sorted curve.
/// Accepts LF or CRLF line endings and `#` comment lines.
pub fn ingest_rt_table(mut input: impl Read) -> Result<RTCurve> {
    let mut raw = Vec::new();
    input.read_to_end(&mut raw)?;
    let text =
        String::from_utf8(raw).map_err(|e| parse_error(0, format!("input is not UTF-8: {e}")))?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(&text);

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut header_seen = false;
    let mut points = Vec::new();
    for record in reader.records() {
        let record =
            record.map_err(|e| parse_error(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if !header_seen {
            let got: Vec<&str> = record.iter().collect();
            if got != ["temperature_K", "resistance_ohm"] {
                return Err(parse_error(
                    line,
                    format!("expected header {RT_HEADER:?}, got {:?}", got.join(",")),
                ));
            }
            header_seen = true;
            continue;
        }
        if record.len() != 2 {
            return Err(parse_error(
                line,
                format!("expected 2 columns, got {}", record.len()),
            ));
        }
        let cell = |i: usize| -> Result<f64> {
            record[i]
                .parse::<f64>()
                .map_err(|_| parse_error(line, format!("non-numeric cell {:?}", &record[i])))
        };
        let (t, r) = (cell(0)?, cell(1)?);
        if !t.is_finite() || t < 0.0 || !r.is_finite() || r < 0.0 {
            return Err(parse_error(
                line,
                "temperature and resistance must be finite and >= 0",
            ));
        }
        points.push((t, r));
    }
    if !header_seen {
        return Err(parse_error(0, "empty input"));
    }
    if points.is_empty() {
        return Err(parse_error(0, "no data rows"));
    }
    let mut curve = RTCurve::new(points)?;
    metadata(text, &mut curve)?;
    Ok(curve)
}
