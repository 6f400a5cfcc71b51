//! File serialization. CSV headers are a stable contract:
//!
//! * roc     — `pfa,pd_theory,pd_sim,ci_low,ci_high,trials`
//! * sweep   — `alpha,h,pfa_nominal,pfa_emp,ci_low,ci_high,trials`
//! * compare — `pfa,pd_clairvoyant,pd_case_a,pd_case_b,gap_a,gap_b`
//! * scan    — `index,statistic,threshold,decision`
//! * profile — `index,intensity,isTarget`
//!
//! Numbers carry 17 significant digits so every file reloads bit-exact;
//! empty cells stand for absent optional values. JSON output serializes
//! the full result structs.

use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use pareto_cfar::{CellDecision, CompareResult, DetectorClass, RangeProfile, SweepResult};

use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutFormat {
    Csv,
    Json,
}

impl FromStr for OutFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutFormat::Csv),
            "json" => Ok(OutFormat::Json),
            other => Err(format!("unknown format `{other}` (csv or json)")),
        }
    }
}

/// Explicit `--format` wins; otherwise the output extension decides,
/// defaulting to csv.
pub fn resolve_format(flag: Option<&str>, path: &Path) -> CliResult<OutFormat> {
    match flag {
        Some(s) => s.parse().map_err(CliError::Validation),
        None => Ok(match path.extension().and_then(|e| e.to_str()) {
            Some("json") => OutFormat::Json,
            _ => OutFormat::Csv,
        }),
    }
}

/// 17 significant digits: enough for bit-exact f64 round-trips.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

fn parse_field<T: FromStr>(field: &str, line: usize, what: &str) -> CliResult<T> {
    field.trim().parse::<T>().map_err(|_| {
        CliError::validation(format!("line {line}: cannot parse {what} from `{field}`"))
    })
}

fn parse_opt_field<T: FromStr>(field: &str, line: usize, what: &str) -> CliResult<Option<T>> {
    if field.trim().is_empty() {
        Ok(None)
    } else {
        parse_field(field, line, what).map(Some)
    }
}

fn split_csv(text: &str, header: &str, columns: usize) -> CliResult<Vec<Vec<String>>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == header => {}
        other => {
            return Err(CliError::validation(format!(
                "expected header `{header}`, found `{}`",
                other.unwrap_or("")
            )))
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<String> = line.split(',').map(str::to_owned).collect();
        if fields.len() != columns {
            return Err(CliError::validation(format!(
                "line {}: expected {columns} fields, found {}",
                i + 2,
                fields.len()
            )));
        }
        rows.push(fields);
    }
    Ok(rows)
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        }
    }
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Io(format!("JSON serialization: {e}")))?;
    s.push('\n');
    Ok(s)
}

// ---------------------------------------------------------------- roc --

/// Merged theory/simulation ROC table; what `roc` writes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocTable {
    pub kind: DetectorClass,
    pub window_size: usize,
    pub alpha: f64,
    pub rho: f64,
    pub h: f64,
    pub rows: Vec<RocRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocRow {
    pub pfa: f64,
    pub pd_theory: f64,
    pub pd_sim: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub trials: Option<u64>,
}

pub const ROC_HEADER: &str = "pfa,pd_theory,pd_sim,ci_low,ci_high,trials";

pub fn roc_to_csv(table: &RocTable) -> String {
    let mut out = String::from(ROC_HEADER);
    out.push('\n');
    for r in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_num(r.pfa),
            fmt_num(r.pd_theory),
            fmt_opt(r.pd_sim),
            fmt_opt(r.ci_low),
            fmt_opt(r.ci_high),
            r.trials.map(|t| t.to_string()).unwrap_or_default()
        ));
    }
    out
}

pub fn roc_rows_from_csv(text: &str) -> CliResult<Vec<RocRow>> {
    split_csv(text, ROC_HEADER, 6)?
        .into_iter()
        .enumerate()
        .map(|(i, f)| {
            let line = i + 2;
            Ok(RocRow {
                pfa: parse_field(&f[0], line, "pfa")?,
                pd_theory: parse_field(&f[1], line, "pd_theory")?,
                pd_sim: parse_opt_field(&f[2], line, "pd_sim")?,
                ci_low: parse_opt_field(&f[3], line, "ci_low")?,
                ci_high: parse_opt_field(&f[4], line, "ci_high")?,
                trials: parse_opt_field(&f[5], line, "trials")?,
            })
        })
        .collect()
}

// -------------------------------------------------------------- sweep --

pub const SWEEP_HEADER: &str = "alpha,h,pfa_nominal,pfa_emp,ci_low,ci_high,trials";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub h: f64,
    pub pfa_nominal: f64,
    pub pfa_emp: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: u64,
}

pub fn sweep_to_csv(sweep: &SweepResult) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for p in &sweep.points {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt_num(p.alpha),
            fmt_num(p.h),
            fmt_num(sweep.nominal_pfa),
            fmt_num(p.estimate.probability),
            fmt_num(p.estimate.ci_low),
            fmt_num(p.estimate.ci_high),
            p.estimate.trials
        ));
    }
    out
}

pub fn sweep_rows_from_csv(text: &str) -> CliResult<Vec<SweepRow>> {
    split_csv(text, SWEEP_HEADER, 7)?
        .into_iter()
        .enumerate()
        .map(|(i, f)| {
            let line = i + 2;
            Ok(SweepRow {
                alpha: parse_field(&f[0], line, "alpha")?,
                h: parse_field(&f[1], line, "h")?,
                pfa_nominal: parse_field(&f[2], line, "pfa_nominal")?,
                pfa_emp: parse_field(&f[3], line, "pfa_emp")?,
                ci_low: parse_field(&f[4], line, "ci_low")?,
                ci_high: parse_field(&f[5], line, "ci_high")?,
                trials: parse_field(&f[6], line, "trials")?,
            })
        })
        .collect()
}

pub fn sweep_rows(sweep: &SweepResult) -> Vec<SweepRow> {
    sweep
        .points
        .iter()
        .map(|p| SweepRow {
            alpha: p.alpha,
            h: p.h,
            pfa_nominal: sweep.nominal_pfa,
            pfa_emp: p.estimate.probability,
            ci_low: p.estimate.ci_low,
            ci_high: p.estimate.ci_high,
            trials: p.estimate.trials,
        })
        .collect()
}

// ------------------------------------------------------------ compare --

pub const COMPARE_HEADER: &str = "pfa,pd_clairvoyant,pd_case_a,pd_case_b,gap_a,gap_b";

pub fn compare_to_csv(result: &CompareResult) -> String {
    let mut out = String::from(COMPARE_HEADER);
    out.push('\n');
    for p in &result.points {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_num(p.pfa),
            fmt_num(p.pd_clairvoyant),
            fmt_num(p.pd_case_a),
            fmt_num(p.pd_case_b),
            fmt_num(p.gap_a),
            fmt_num(p.gap_b)
        ));
    }
    out
}

pub fn compare_rows_from_csv(text: &str) -> CliResult<Vec<pareto_cfar::ComparePoint>> {
    split_csv(text, COMPARE_HEADER, 6)?
        .into_iter()
        .enumerate()
        .map(|(i, f)| {
            let line = i + 2;
            Ok(pareto_cfar::ComparePoint {
                pfa: parse_field(&f[0], line, "pfa")?,
                pd_clairvoyant: parse_field(&f[1], line, "pd_clairvoyant")?,
                pd_case_a: parse_field(&f[2], line, "pd_case_a")?,
                pd_case_b: parse_field(&f[3], line, "pd_case_b")?,
                gap_a: parse_field(&f[4], line, "gap_a")?,
                gap_b: parse_field(&f[5], line, "gap_b")?,
            })
        })
        .collect()
}

// --------------------------------------------------------------- scan --

pub const SCAN_HEADER: &str = "index,statistic,threshold,decision";

pub fn scan_to_csv(cells: &[CellDecision]) -> String {
    let mut out = String::from(SCAN_HEADER);
    out.push('\n');
    for c in cells {
        out.push_str(&format!(
            "{},{},{},{}\n",
            c.index,
            fmt_num(c.statistic),
            fmt_num(c.threshold),
            c.target_present as u8
        ));
    }
    out
}

pub fn scan_rows_from_csv(text: &str) -> CliResult<Vec<CellDecision>> {
    split_csv(text, SCAN_HEADER, 4)?
        .into_iter()
        .enumerate()
        .map(|(i, f)| {
            let line = i + 2;
            let decision: u8 = parse_field(&f[3], line, "decision")?;
            if decision > 1 {
                return Err(CliError::validation(format!(
                    "line {line}: decision must be 0 or 1"
                )));
            }
            Ok(CellDecision {
                index: parse_field(&f[0], line, "index")?,
                statistic: parse_field(&f[1], line, "statistic")?,
                threshold: parse_field(&f[2], line, "threshold")?,
                target_present: decision == 1,
            })
        })
        .collect()
}

// ------------------------------------------------------------ profile --

pub const PROFILE_HEADER: &str = "index,intensity,isTarget";

pub fn profile_to_csv(profile: &RangeProfile) -> String {
    let mut out = String::from(PROFILE_HEADER);
    out.push('\n');
    for (i, &v) in profile.cells.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{}\n",
            i,
            fmt_num(v),
            profile.is_target(i) as u8
        ));
    }
    out
}

pub fn profile_from_csv(text: &str) -> CliResult<RangeProfile> {
    let rows = split_csv(text, PROFILE_HEADER, 3)?;
    let mut cells = Vec::with_capacity(rows.len());
    let mut targets = Vec::new();
    for (i, f) in rows.into_iter().enumerate() {
        let line = i + 2;
        let index: usize = parse_field(&f[0], line, "index")?;
        if index != i {
            return Err(CliError::validation(format!(
                "line {line}: indices must be consecutive from 0"
            )));
        }
        cells.push(parse_field(&f[1], line, "intensity")?);
        let is_target: u8 = parse_field(&f[2], line, "isTarget")?;
        if is_target == 1 {
            targets.push(index);
        }
    }
    Ok(RangeProfile { cells, targets })
}
