//! Command implementations and their exit-code policy.

use crate::config::{load_config, LindelofCase};
use crate::emit::{report_to_csv, report_to_svg};
use convmap_core::conformal::{build_geodesic_map, ConformalMap, ElementaryMap};
use convmap_core::convergence::{run_family_experiment, ConvergenceError, RowOutcome};
use convmap_core::domains::make_unit_disk;
use convmap_core::geometry::Point;
use convmap_core::lindelof::{
    harmonic_measure_wos, two_constants_check, verify_lemma, BoundaryTarget, LemmaReport,
    LindelofError, LindelofInstance, WosEstimate, WosParams,
};
use serde::Serialize;
use std::path::Path;

/// Failure classes mapped onto process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2: unreadable or invalid configuration and refused parameters.
    Config(String),
    /// Exit 3: a hypothesis gate failed.
    Hypothesis(String),
    /// Exit 4: numerical failure while building or measuring.
    Numerical(String),
    /// Exit 5: oracle self-test regression.
    OracleRegression(String),
    /// Exit 1: verification checks did not pass.
    ChecksFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ChecksFailed(_) => 1,
            CliError::Config(_) => 2,
            CliError::Hypothesis(_) => 3,
            CliError::Numerical(_) => 4,
            CliError::OracleRegression(_) => 5,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m)
            | CliError::Hypothesis(m)
            | CliError::Numerical(m)
            | CliError::OracleRegression(m)
            | CliError::ChecksFailed(m) => m,
        }
    }
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| {
                CliError::Numerical(format!("cannot create {}: {e}", parent.display()))
            })?;
        }
    }
    std::fs::write(path, bytes)
        .map_err(|e| CliError::Numerical(format!("cannot write {}: {e}", path.display())))
}

#[derive(Serialize)]
struct FamilyJson<'a> {
    seed: u64,
    family: &'a convmap_core::domains::DomainFamily,
    convergence: &'a convmap_core::convergence::ConvergenceConfig,
    report: &'a convmap_core::convergence::ConvergenceReport,
    kernel_not_converging: bool,
    hypotheses_all_pass: bool,
}

pub fn cmd_family(
    config_path: &Path,
    seed_override: Option<u64>,
    quiet: bool,
) -> Result<(), CliError> {
    let mut config = load_config(config_path).map_err(CliError::Config)?;
    if let Some(seed) = seed_override {
        config.seed = seed;
    }
    let mut family = config
        .family
        .clone()
        .ok_or_else(|| CliError::Config("config has no `family` section".into()))?;
    let convergence = config
        .convergence
        .ok_or_else(|| CliError::Config("config has no `convergence` section".into()))?;
    if let Some(nodes) = config.nodes {
        family.nodes = nodes;
    }
    let (csv_path, json_path, svg_path) = match (
        &config.outputs.csv,
        &config.outputs.json,
        &config.outputs.svg,
    ) {
        (Some(c), Some(j), Some(s)) => (c.clone(), j.clone(), s.clone()),
        _ => {
            return Err(CliError::Config(
                "family experiments need csv, json and svg output paths".into(),
            ))
        }
    };

    let mut report =
        run_family_experiment(&family, &convergence, config.kernel_grid).map_err(|e| match e {
            ConvergenceError::CompactNotInArc => CliError::Hypothesis(e.to_string()),
            ConvergenceError::CompactNotOnCircle { .. } => CliError::Hypothesis(e.to_string()),
            ConvergenceError::Domain(d) => CliError::Hypothesis(d.to_string()),
            ConvergenceError::Conformal(c) => CliError::Numerical(c.to_string()),
        })?;

    if !config.emit_timings {
        for row in report.rows.iter_mut() {
            if let RowOutcome::Measured(r) = row {
                r.build_ms = 0;
                r.eval_ms = 0;
            }
        }
    }

    // The certificate flag from the measured inscribed-disk radii.
    let rhos: Vec<f64> = report
        .rows
        .iter()
        .filter_map(|r| r.as_measured().map(|m| m.rho))
        .collect();
    let kernel_not_converging = match (rhos.first(), rhos.last()) {
        (Some(&first), Some(&last)) => last > 0.5 * first + report.kernel_grid_resolution,
        _ => true,
    };

    let hypotheses_all_pass = report.all_hypotheses_pass();

    write_output(&csv_path, report_to_csv(&report).as_bytes())?;
    let json = FamilyJson {
        seed: config.seed,
        family: &family,
        convergence: &convergence,
        report: &report,
        kernel_not_converging,
        hypotheses_all_pass,
    };
    let mut json_text = serde_json::to_string_pretty(&json)
        .map_err(|e| CliError::Numerical(format!("json serialization: {e}")))?;
    json_text.push('\n');
    write_output(&json_path, json_text.as_bytes())?;

    let boundaries: Vec<_> = (family.j_range.0..=family.j_range.1)
        .filter_map(|j| family.generate(j).ok().map(|d| (j, d)))
        .collect();
    write_output(&svg_path, report_to_svg(&report, &boundaries).as_bytes())?;

    if !quiet {
        println!(
            "family experiment: {} rows, floor bd {:.3e}, outputs {}, {}, {}",
            report.rows.len(),
            report.floor.bd_sup_err,
            csv_path.display(),
            json_path.display(),
            svg_path.display()
        );
    }

    let mut failed_rows = report
        .rows
        .iter()
        .filter(|r| matches!(r, RowOutcome::Failed { .. }))
        .peekable();
    if failed_rows.peek().is_some() {
        let detail: Vec<String> = failed_rows
            .map(|r| match r {
                RowOutcome::Failed { j, error, .. } => format!("j={j}: {error}"),
                _ => unreachable!(),
            })
            .collect();
        return Err(CliError::Numerical(detail.join("; ")));
    }
    if !hypotheses_all_pass {
        return Err(CliError::Hypothesis(
            "one or more rows failed the hypothesis gate".into(),
        ));
    }
    Ok(())
}

fn identity_sup_error(map: &ConformalMap) -> Result<f64, CliError> {
    let mut sup: f64 = 0.0;
    for i in 0..41 {
        for j in 0..41 {
            let z = Point::new(-0.9 + 1.8 * i as f64 / 40.0, -0.9 + 1.8 * j as f64 / 40.0);
            if z.norm() > 0.9 {
                continue;
            }
            let w = map
                .eval(z)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            sup = sup.max((w - z).norm());
        }
    }
    Ok(sup)
}

pub fn cmd_oracle(nodes: &[usize], inject_bug: bool, quiet: bool) -> Result<(), CliError> {
    for &n in nodes {
        if n < 16 {
            return Err(CliError::Config(format!(
                "oracle refuses node count {n} below 16"
            )));
        }
    }
    let sabotage = |map: ConformalMap| -> ConformalMap {
        if inject_bug {
            // Deliberately broken branch convention stand-in for the
            // regression path: a stray rotation after normalization.
            let mut stages = map.stages().to_vec();
            stages.push(ElementaryMap::Rotation { theta: 0.05 });
            ConformalMap::from_stages(map.domain(), stages, true)
        } else {
            map
        }
    };

    let mut disk_errors: Vec<(usize, f64)> = Vec::new();
    for &n in nodes {
        let domain = make_unit_disk(n).map_err(|e| CliError::Numerical(e.to_string()))?;
        let map = build_geodesic_map(&domain)
            .and_then(|m| m.normalize_at_origin())
            .map_err(|e| CliError::Numerical(e.to_string()))?;
        let err = identity_sup_error(&sabotage(map))?;
        disk_errors.push((n, err));
        if !quiet {
            println!("disk oracle   n={n:5}  sup|f - id| on 0.9-disk = {err:.6e}");
        }
    }
    let &max_nodes = nodes.iter().max().unwrap_or(&1024);
    let c = Point::new(0.4, 0.0);
    let r = 1.5;
    let offcenter: Vec<Point> = (0..max_nodes)
        .map(|k| c + Point::from_polar(r, std::f64::consts::TAU * k as f64 / max_nodes as f64))
        .collect();
    let domain = convmap_core::geometry::JordanDomain::new(offcenter, 1e-9)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let map = build_geodesic_map(&domain)
        .and_then(|m| m.normalize_at_origin())
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let map = sabotage(map);
    let mut off_err: f64 = 0.0;
    for i in 0..41 {
        for j in 0..41 {
            let z = Point::new(-0.9 + 1.8 * i as f64 / 40.0, -0.9 + 1.8 * j as f64 / 40.0);
            if z.norm() > 0.9 {
                continue;
            }
            let w = map
                .eval(z)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            off_err =
                off_err.max((w - convmap_core::conformal::eval_offcenter_oracle(c, r, z)).norm());
        }
    }
    if !quiet {
        println!("moebius oracle n={max_nodes:5}  sup|f - oracle|        = {off_err:.6e}");
    }

    let final_err = disk_errors.last().map(|e| e.1).unwrap_or(f64::INFINITY);
    if final_err > 1e-2 || off_err > 1e-2 {
        return Err(CliError::OracleRegression(format!(
            "oracle errors too large: disk {final_err:.3e}, moebius {off_err:.3e}"
        )));
    }
    for w in disk_errors.windows(2) {
        if w[1].1 > w[0].1 * 1.1 {
            return Err(CliError::OracleRegression(format!(
                "disk oracle error grew under refinement: {disk_errors:?}"
            )));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct LindelofJson {
    seed: u64,
    cases: Vec<LindelofCaseJson>,
    all_pass: bool,
}

#[derive(Serialize)]
struct LindelofCaseJson {
    index: usize,
    report: LemmaReport,
}

pub fn cmd_lindelof(
    config_path: &Path,
    seed_override: Option<u64>,
    quiet: bool,
) -> Result<(), CliError> {
    let mut config = load_config(config_path).map_err(CliError::Config)?;
    if let Some(seed) = seed_override {
        config.seed = seed;
    }
    let cases = config
        .lindelof
        .clone()
        .ok_or_else(|| CliError::Config("config has no `lindelof` section".into()))?;
    if cases.is_empty() {
        return Err(CliError::Config("lindelof section is empty".into()));
    }
    let json_path = config
        .outputs
        .json
        .clone()
        .ok_or_else(|| CliError::Config("lindelof runs need a json output path".into()))?;

    let mut out_cases = Vec::new();
    let mut all_pass = true;
    for (index, case) in cases.iter().enumerate() {
        let report = run_lindelof_case(case, config.seed, quiet)?;
        all_pass &= report.conclusion_ok && report.eq3_ok;
        out_cases.push(LindelofCaseJson { index, report });
    }

    let json = LindelofJson {
        seed: config.seed,
        cases: out_cases,
        all_pass,
    };
    let mut text = serde_json::to_string_pretty(&json)
        .map_err(|e| CliError::Numerical(format!("json serialization: {e}")))?;
    text.push('\n');
    write_output(&json_path, text.as_bytes())?;
    if !quiet {
        println!(
            "lindelof verification: {} case(s), all_pass = {all_pass}, report {}",
            cases.len(),
            json_path.display()
        );
    }
    if !all_pass {
        return Err(CliError::ChecksFailed(
            "a bound or boundary-estimate check failed".into(),
        ));
    }
    Ok(())
}

fn run_lindelof_case(case: &LindelofCase, seed: u64, quiet: bool) -> Result<LemmaReport, CliError> {
    let domain = case.domain.build().map_err(CliError::Config)?;
    let f = case.test_function.build();
    let instance = LindelofInstance::measure(
        domain.clone(),
        case.z0,
        case.r,
        case.shell_band,
        f,
        case.m,
        case.samples,
    )
    .map_err(|e| match e {
        LindelofError::HypothesisNotMet { .. } | LindelofError::NoFreeArc => {
            CliError::Hypothesis(e.to_string())
        }
        other => CliError::Numerical(other.to_string()),
    })?;
    let mut report = verify_lemma(&instance, 4 * case.samples).map_err(|e| match e {
        LindelofError::HypothesisNotMet { .. } => CliError::Hypothesis(e.to_string()),
        other => CliError::Numerical(other.to_string()),
    })?;

    if let Some(wos) = &case.wos {
        if wos.trials < 1000 {
            eprintln!(
                "warning: {} walk-on-spheres trials give a standard error too large to be useful; skipping the cross-check",
                wos.trials
            );
        } else {
            let target = wos.target.unwrap_or(BoundaryTarget::WithinDisk {
                center: case.z0,
                radius: case.r,
            });
            let params = WosParams {
                absorb_tol: wos.absorb_tol,
                ..WosParams::default()
            };
            let est: WosEstimate =
                harmonic_measure_wos(&domain, case.z0, &target, wos.trials, seed, params)
                    .map_err(|e| CliError::Numerical(e.to_string()))?;
            report.two_constants_ok = Some(two_constants_check(
                report.eps_hat,
                report.m_hat,
                report.f_z0_abs,
                &est,
            ));
            report.omega = Some(est);
        }
    }
    if !quiet {
        println!(
            "case: m={} eps={:.3e} M={:.3e} bound={:.3e} |f(z0)|={:.3e} conclusion={} eq3={}",
            report.m,
            report.eps_hat,
            report.m_hat,
            report.bound,
            report.f_z0_abs,
            report.conclusion_ok,
            report.eq3_ok
        );
    }
    Ok(report)
}
