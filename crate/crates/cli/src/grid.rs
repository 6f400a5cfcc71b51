//! Flag-text parsers: numeric grids, trial counts, target lists.

use crate::{CliError, CliResult};

/// Parse `start:stop:step` (inclusive of both endpoints within half a
/// step) or a comma-separated list, or a single value.
pub fn parse_grid(text: &str) -> CliResult<Vec<f64>> {
    let text = text.trim();
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::validation(format!(
                "grid `{text}` must be start:stop:step"
            )));
        }
        let start = parse_f64(parts[0])?;
        let stop = parse_f64(parts[1])?;
        let step = parse_f64(parts[2])?;
        if step <= 0.0 {
            return Err(CliError::validation(format!(
                "grid step must be positive, got {step}"
            )));
        }
        if stop < start {
            return Err(CliError::validation(format!(
                "grid stop {stop} below start {start}"
            )));
        }
        let mut values = Vec::new();
        let mut i = 0u32;
        loop {
            let v = start + step * i as f64;
            if v > stop + step / 2.0 {
                break;
            }
            values.push(v);
            i += 1;
        }
        Ok(values)
    } else {
        text.split(',')
            .map(parse_f64)
            .collect::<CliResult<Vec<f64>>>()
    }
}

pub fn parse_f64(text: &str) -> CliResult<f64> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| CliError::validation(format!("cannot parse number `{}`", text.trim())))?;
    if !v.is_finite() {
        return Err(CliError::validation(format!(
            "number `{text}` must be finite"
        )));
    }
    Ok(v)
}

/// Parse a count that may be written in scientific notation (`1e6`).
pub fn parse_count(text: &str) -> CliResult<u64> {
    let t = text.trim();
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    let v = parse_f64(t)?;
    if v < 0.0 || v.fract() != 0.0 || v > 2f64.powi(53) {
        return Err(CliError::validation(format!(
            "count `{t}` must be a nonnegative integer"
        )));
    }
    Ok(v as u64)
}

/// Parse planted targets `cell:rho,cell:rho`.
pub fn parse_targets(text: &str) -> CliResult<Vec<(usize, f64)>> {
    text.split(',')
        .map(|pair| {
            let (cell, shape) = pair
                .trim()
                .split_once(':')
                .ok_or_else(|| CliError::validation(format!("target `{pair}` must be cell:rho")))?;
            let cell: usize = cell
                .trim()
                .parse()
                .map_err(|_| CliError::validation(format!("bad target cell `{cell}`")))?;
            Ok((cell, parse_f64(shape)?))
        })
        .collect()
}
