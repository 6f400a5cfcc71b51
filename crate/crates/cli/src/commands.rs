//! Subcommand implementations: resolve flags against the config file,
//! call into the library, serialize results, print a one-line summary,
//! and fail with exit code 2 when an in-run assertion is violated.

use std::path::PathBuf;

use pareto_cfar::{
    case_a_threshold, case_b_threshold, cfar_sweep as core_sweep, clairvoyant_threshold,
    compare_to_clairvoyant, exact_regime, generate_profile, negative_control, roc_curve,
    run_identity_suite, scan_profile, DetectionInput, DetectorClass, DetectorSpec64,
    ParetoParams64, ProfileConfig, RocSource, TargetSpec,
};

use crate::config::ConfigMap;
use crate::grid::{parse_count, parse_grid, parse_targets};
use crate::output::{
    compare_to_csv, profile_to_csv, resolve_format, roc_to_csv, scan_to_csv, sweep_to_csv, to_json,
    OutFormat, RocRow, RocTable,
};
use crate::{
    CliError, CliResult, CompareArgs, DetectArgs, RocArgs, ScanArgs, SweepArgs, ThresholdArgs,
    ValidateArgs,
};

fn parse_kind(s: &str) -> CliResult<DetectorClass> {
    s.parse::<DetectorClass>()
        .map_err(|e| CliError::validation(e.to_string()))
}

fn pareto(shape: f64, scale: f64) -> CliResult<ParetoParams64> {
    Ok(ParetoParams64::new(shape, scale)?)
}

pub fn threshold(args: ThresholdArgs, cfg: &ConfigMap) -> CliResult<()> {
    let kind = parse_kind(&cfg.require(args.kind, "kind")?)?;
    let pfa: f64 = cfg.require(args.pfa, "pfa")?;

    println!("kind: {kind}");
    println!("pfa: {pfa}");
    match kind {
        DetectorClass::Clairvoyant => {
            let alpha: f64 = cfg.require(args.alpha, "alpha")?;
            let h: f64 = cfg.require(args.h, "h")?;
            println!("alpha: {alpha}");
            println!("h: {h}");
            println!(
                "threshold: {}",
                clairvoyant_threshold(pfa, &pareto(alpha, h)?)?
            );
        }
        DetectorClass::CaseA => {
            let n: usize = cfg.require(args.n, "n")?;
            println!("n: {n}");
            println!("threshold: {}", case_a_threshold(pfa, n)?);
            println!("exact_regime: {}", exact_regime(pfa, n));
        }
        DetectorClass::CaseB => {
            let n: usize = cfg.require(args.n, "n")?;
            println!("n: {n}");
            println!("threshold: {}", case_b_threshold(pfa, n)?);
            println!("exact_regime: {}", exact_regime(pfa, n));
        }
    }
    Ok(())
}

pub fn detect(args: DetectArgs, cfg: &ConfigMap) -> CliResult<()> {
    let kind = parse_kind(&cfg.require(args.kind, "kind")?)?;
    let pfa: f64 = cfg.require(args.pfa, "pfa")?;
    let cut: f64 = cfg.require(args.cut, "cut")?;
    let window = match cfg.resolve(args.window, "window")? {
        Some(w) => parse_grid(&w)?,
        None => Vec::new(),
    };

    let spec = match kind {
        DetectorClass::Clairvoyant => {
            let alpha: f64 = cfg.require(args.alpha, "alpha")?;
            let h: f64 = cfg.require(args.h, "h")?;
            DetectorSpec64::clairvoyant(pareto(alpha, h)?, pfa, window.len())?
        }
        DetectorClass::CaseA => {
            let h: f64 = cfg.require(args.h, "h")?;
            DetectorSpec64::case_a(h, pfa, window.len())?
        }
        DetectorClass::CaseB => DetectorSpec64::case_b(pfa, window.len())?,
    };
    let decision = spec.detect(&DetectionInput::new(cut, &window))?;
    println!("kind: {kind}");
    println!("statistic: {}", decision.statistic);
    println!("threshold: {}", decision.threshold);
    println!("target_present: {}", decision.target_present);
    Ok(())
}

pub fn roc(args: RocArgs, cfg: &ConfigMap, seed: u64) -> CliResult<()> {
    let kind = parse_kind(&cfg.require(args.kind, "kind")?)?;
    let alpha: f64 = cfg.require(args.alpha, "alpha")?;
    let rho: f64 = cfg.require(args.rho, "rho")?;
    let h: f64 = cfg.require(args.h, "h")?;
    let grid = parse_grid(&cfg.require(args.pfa_grid, "pfa-grid")?)?;
    let mode = cfg
        .resolve(args.mode, "mode")?
        .unwrap_or_else(|| "both".into());
    let trials = parse_count(
        &cfg.resolve(args.trials, "trials")?
            .unwrap_or_else(|| "1e6".into()),
    )?;
    let out: PathBuf = cfg.require(args.out, "out")?;
    let format = resolve_format(cfg.resolve(args.format, "format")?.as_deref(), &out)?;

    let (want_theory, want_sim) = match mode.as_str() {
        "theory" => (true, false),
        "sim" | "simulation" => (true, true),
        "both" => (true, true),
        other => {
            return Err(CliError::validation(format!(
                "unknown mode `{other}` (theory, sim or both)"
            )))
        }
    };
    debug_assert!(want_theory);

    let clutter = pareto(alpha, h)?;
    let target = pareto(rho, h)?;
    let base_pfa = grid[0];
    let n: usize = match kind {
        DetectorClass::Clairvoyant => cfg.resolve(args.n, "n")?.unwrap_or(0),
        _ => cfg.require(args.n, "n")?,
    };
    let spec = match kind {
        DetectorClass::Clairvoyant => DetectorSpec64::clairvoyant(clutter, base_pfa, n)?,
        DetectorClass::CaseA => DetectorSpec64::case_a(h, base_pfa, n)?,
        DetectorClass::CaseB => DetectorSpec64::case_b(base_pfa, n)?,
    };

    let theory = roc_curve(&spec, &clutter, &target, &grid, RocSource::Theory, 0, seed)?;
    let sim = if want_sim {
        Some(roc_curve(
            &spec,
            &clutter,
            &target,
            &grid,
            RocSource::Simulation,
            trials,
            seed,
        )?)
    } else {
        None
    };

    let rows: Vec<RocRow> = theory
        .points
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let s = sim.as_ref().map(|c| c.points[i]);
            RocRow {
                pfa: t.pfa,
                pd_theory: t.pd,
                pd_sim: s.map(|p| p.pd),
                ci_low: s.and_then(|p| p.ci_low),
                ci_high: s.and_then(|p| p.ci_high),
                trials: s.and_then(|p| p.trials),
            }
        })
        .collect();
    let table = RocTable {
        kind,
        window_size: n,
        alpha,
        rho,
        h,
        rows,
    };

    let contents = match format {
        OutFormat::Csv => roc_to_csv(&table),
        OutFormat::Json => to_json(&table)?,
    };
    crate::output::write_file(&out, &contents)?;

    if let Some(_sim) = &sim {
        let mut max_dev = 0.0f64;
        let mut bound_at_max = 0.0f64;
        let mut sigma_violations = 0usize;
        let mut ci_violations = 0usize;
        for r in &table.rows {
            let pd_sim = r.pd_sim.unwrap();
            let bound = 3.0 * (r.pd_theory * (1.0 - r.pd_theory) / trials as f64).sqrt();
            let dev = (pd_sim - r.pd_theory).abs();
            if dev > max_dev {
                max_dev = dev;
                bound_at_max = bound;
            }
            if dev > bound {
                sigma_violations += 1;
            }
            if !(r.ci_low.unwrap() <= r.pd_theory && r.pd_theory <= r.ci_high.unwrap()) {
                ci_violations += 1;
            }
        }
        println!(
            "roc {kind} n={n} alpha={alpha} rho={rho} h={h}: {} points at {trials} trials; max |pd_sim-pd_theory| = {:.3e} (3-sigma bound {:.3e}); CI violations {}/{}; wrote {}",
            table.rows.len(), max_dev, bound_at_max, ci_violations, table.rows.len(), out.display()
        );
        if sigma_violations > 0 {
            return Err(CliError::Assertion(format!(
                "{sigma_violations} ROC point(s) deviate from theory beyond 3 sigma"
            )));
        }
    } else {
        println!(
            "roc {kind} n={n} alpha={alpha} rho={rho} h={h}: {} theory points; wrote {}",
            table.rows.len(),
            out.display()
        );
    }
    Ok(())
}

pub fn cfar_sweep(args: SweepArgs, cfg: &ConfigMap, seed: u64) -> CliResult<()> {
    let kind = parse_kind(&cfg.require(args.kind, "kind")?)?;
    let n: usize = cfg.require(args.n, "n")?;
    let pfa: f64 = cfg.require(args.pfa, "pfa")?;
    let alphas = parse_grid(&cfg.require(args.alpha, "alpha")?)?;
    let hs = parse_grid(&cfg.require(args.h, "h")?)?;
    let trials = parse_count(
        &cfg.resolve(args.trials, "trials")?
            .unwrap_or_else(|| "1e6".into()),
    )?;
    let out: PathBuf = cfg.require(args.out, "out")?;
    let format = resolve_format(cfg.resolve(args.format, "format")?.as_deref(), &out)?;

    let spec = match kind {
        DetectorClass::CaseA => {
            if hs.len() != 1 {
                return Err(CliError::validation(
                    "case-a sweeps need a single --h value (the known scale)",
                ));
            }
            DetectorSpec64::case_a(hs[0], pfa, n)?
        }
        DetectorClass::CaseB => DetectorSpec64::case_b(pfa, n)?,
        DetectorClass::Clairvoyant => {
            return Err(CliError::validation(
                "cfar-sweep applies to the adaptive detectors (case-a, case-b)",
            ))
        }
    };

    let sweep = core_sweep(&spec, &alphas, &hs, trials, seed)?;
    let contents = match format {
        OutFormat::Csv => sweep_to_csv(&sweep),
        OutFormat::Json => to_json(&sweep)?,
    };
    crate::output::write_file(&out, &contents)?;

    let contained = sweep
        .points
        .iter()
        .filter(|p| p.estimate.contains(pfa))
        .count();
    let flat = sweep.is_flat(0.01);
    println!(
        "cfar-sweep {kind} n={n} pfa={pfa}: CI contains nominal at {contained}/{} points; max pairwise z = {:.2} (1% family bound {:.2}); wrote {}",
        sweep.points.len(),
        sweep.max_pairwise_z(),
        sweep.flatness_threshold(0.01),
        out.display()
    );
    if contained != sweep.points.len() {
        return Err(CliError::Assertion(format!(
            "{} sweep point(s) miss the nominal pfa",
            sweep.points.len() - contained
        )));
    }
    if !flat {
        return Err(CliError::Assertion(
            "pairwise flatness test failed at the 1% family level".to_owned(),
        ));
    }
    Ok(())
}

pub fn compare(args: CompareArgs, cfg: &ConfigMap, seed: u64) -> CliResult<()> {
    let n: usize = cfg.require(args.n, "n")?;
    let alpha: f64 = cfg.require(args.alpha, "alpha")?;
    let rho: f64 = cfg.require(args.rho, "rho")?;
    let h: f64 = cfg.require(args.h, "h")?;
    let grid = parse_grid(&cfg.require(args.pfa_grid, "pfa-grid")?)?;
    let trials = parse_count(
        &cfg.resolve(args.trials, "trials")?
            .unwrap_or_else(|| "0".into()),
    )?;
    let out: PathBuf = cfg.require(args.out, "out")?;
    let format = resolve_format(cfg.resolve(args.format, "format")?.as_deref(), &out)?;

    let clutter = pareto(alpha, h)?;
    let target = pareto(rho, h)?;
    let result = compare_to_clairvoyant(n, &clutter, &target, &grid, trials, seed)?;

    let contents = match format {
        OutFormat::Csv => compare_to_csv(&result),
        OutFormat::Json => to_json(&result)?,
    };
    crate::output::write_file(&out, &contents)?;

    let max_gap_a = result
        .points
        .iter()
        .map(|p| p.gap_a)
        .fold(f64::MIN, f64::max);
    let max_gap_b = result
        .points
        .iter()
        .map(|p| p.gap_b)
        .fold(f64::MIN, f64::max);
    println!(
        "compare n={n} alpha={alpha} rho={rho} h={h} ({}): max gap_a = {max_gap_a:.3e}, max gap_b = {max_gap_b:.3e}; wrote {}",
        if trials == 0 { "theory".to_owned() } else { format!("{trials} trials/point") },
        out.display()
    );
    if trials == 0 {
        let violations = result
            .points
            .iter()
            .filter(|p| p.pd_clairvoyant < p.pd_case_a)
            .count();
        if violations > 0 {
            return Err(CliError::Assertion(format!(
                "{violations} point(s) place case-a above the clairvoyant bound"
            )));
        }
    }
    Ok(())
}

pub fn scan(args: ScanArgs, cfg: &ConfigMap, seed: u64) -> CliResult<()> {
    let cells = parse_count(&cfg.require(args.cells, "cells")?)? as usize;
    let alpha: f64 = cfg.require(args.alpha, "alpha")?;
    let h: f64 = cfg.require(args.h, "h")?;
    let kind = parse_kind(&cfg.require(args.kind, "kind")?)?;
    let pfa: f64 = cfg.require(args.pfa, "pfa")?;
    let n: usize = cfg.resolve(args.n, "n")?.unwrap_or(8);
    let guard: usize = cfg.resolve(args.guard, "guard")?.unwrap_or(2);
    let targets = match cfg.resolve(args.targets, "targets")? {
        Some(t) => parse_targets(&t)?
            .into_iter()
            .map(|(cell, shape)| TargetSpec { cell, shape })
            .collect(),
        None => Vec::new(),
    };
    let out: PathBuf = cfg.require(args.out, "out")?;
    let format = resolve_format(cfg.resolve(args.format, "format")?.as_deref(), &out)?;

    if !n.is_multiple_of(2) || n < 2 {
        return Err(CliError::validation(format!(
            "scan needs an even window size of at least 2 (got {n})"
        )));
    }
    let spec = match kind {
        DetectorClass::Clairvoyant => DetectorSpec64::clairvoyant(pareto(alpha, h)?, pfa, n)?,
        DetectorClass::CaseA => DetectorSpec64::case_a(h, pfa, n)?,
        DetectorClass::CaseB => DetectorSpec64::case_b(pfa, n)?,
    };

    let config = ProfileConfig {
        cell_count: cells,
        clutter: pareto(alpha, h)?,
        targets,
        half_window: n / 2,
        guard,
        seed,
    };
    let interfering = config.interfering_targets();
    if !interfering.is_empty() {
        eprintln!(
            "warning: target pairs {interfering:?} fall inside each other's reference windows; \
             window cells then hold target returns"
        );
    }

    let profile = generate_profile(&config)?;
    let scan = scan_profile(&profile.cells, &spec, guard)?;

    let contents = match format {
        OutFormat::Csv => scan_to_csv(&scan.cells),
        OutFormat::Json => to_json(&scan)?,
    };
    crate::output::write_file(&out, &contents)?;

    if let Some(profile_out) = args
        .profile_out
        .or_else(|| cfg.get("profile-out").map(PathBuf::from))
    {
        let pf = match resolve_format(None, &profile_out)? {
            OutFormat::Csv => profile_to_csv(&profile),
            OutFormat::Json => to_json(&profile)?,
        };
        crate::output::write_file(&profile_out, &pf)?;
    }

    let detections = scan.detections();
    println!(
        "scan {kind} n={n} guard={guard} cells={cells}: {} eligible cells, {detections} detections (rate {:.3e}); wrote {}",
        scan.cells.len(),
        detections as f64 / scan.cells.len() as f64,
        out.display()
    );
    Ok(())
}

pub fn validate(args: ValidateArgs, cfg: &ConfigMap, seed: u64) -> CliResult<()> {
    let samples = parse_count(
        &cfg.resolve(args.samples, "samples")?
            .unwrap_or_else(|| "1e5".into()),
    )? as usize;
    if samples < 100 {
        return Err(CliError::validation(format!(
            "validation needs at least 100 samples per check, got {samples}"
        )));
    }
    let with_negative =
        args.negative_control || cfg.get_parse::<bool>("negative-control")?.unwrap_or(false);

    let mut report = run_identity_suite(samples, seed);
    if with_negative {
        report.checks.push(negative_control(samples, seed));
        report.passed = report.checks.iter().all(|c| c.passed);
    }

    let json = to_json(&report)?;
    let passed_count = report.checks.iter().filter(|c| c.passed).count();
    match &args.out {
        Some(path) => {
            crate::output::write_file(path, &json)?;
            println!(
                "validate: {passed_count}/{} checks passed; wrote {}",
                report.checks.len(),
                path.display()
            );
        }
        None => print!("{json}"),
    }

    if !report.passed {
        let failing: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        return Err(CliError::Assertion(format!(
            "failed checks: {}",
            failing.join(", ")
        )));
    }
    Ok(())
}
