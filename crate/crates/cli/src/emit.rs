//! Deterministic CSV and SVG emission. Floats print in Rust's shortest
//! round-trip form so identical runs produce identical bytes.

use convmap_core::convergence::{ConvergenceReport, RowOutcome};
use convmap_core::geometry::JordanDomain;
use std::fmt::Write as _;

pub const CSV_HEADER: &str = "j,width,rho_j,int_sup_err,bd_sup_err,bd_offset_err,inv_sup_err,equicont_mod,re_fprime0,im_fprime0,build_ms,eval_ms";

pub fn report_to_csv(report: &ConvergenceReport) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &report.rows {
        match row {
            RowOutcome::Measured(r) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{}",
                    r.j,
                    r.width,
                    r.rho,
                    r.int_sup_err,
                    r.bd_sup_err,
                    r.bd_offset_err,
                    r.inv_sup_err,
                    r.equicont_mod,
                    r.fprime0.0,
                    r.fprime0.1,
                    r.build_ms,
                    r.eval_ms
                );
            }
            RowOutcome::HypothesisFailed { j, width, .. } | RowOutcome::Failed { j, width, .. } => {
                let _ = writeln!(out, "{},{},,,,,,,,,,", j, width);
            }
        }
    }
    out
}

const SERIES_COLORS: [(&str, &str); 4] = [
    ("#1f77b4", "bd_sup_err"),
    ("#d62728", "int_sup_err"),
    ("#2ca02c", "inv_sup_err"),
    ("#9467bd", "rho_j"),
];

const BOUNDARY_COLORS: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

/// Hand-emitted two-panel figure: overlaid domain boundaries on the left,
/// log-scale error curves against the family index on the right.
pub fn report_to_svg(report: &ConvergenceReport, boundaries: &[(i32, JordanDomain)]) -> String {
    let mut svg = String::new();
    svg.push_str(r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1200 600">"#);
    svg.push('\n');
    svg.push_str(r#"<rect width="1200" height="600" fill="white"/>"#);
    svg.push('\n');

    // Left panel: domain boundaries in a square viewport.
    let radius = boundaries
        .iter()
        .flat_map(|(_, d)| d.nodes().iter())
        .map(|z| z.norm())
        .fold(1.0, f64::max)
        * 1.05;
    let to_px =
        |x: f64, y: f64| -> (f64, f64) { (300.0 + 270.0 * x / radius, 300.0 - 270.0 * y / radius) };
    for (i, (j, domain)) in boundaries.iter().enumerate() {
        let color = BOUNDARY_COLORS[i % BOUNDARY_COLORS.len()];
        let mut points = String::new();
        for z in domain.nodes() {
            let (x, y) = to_px(z.re, z.im);
            let _ = write!(points, "{x},{y} ");
        }
        if let Some(z) = domain.nodes().first() {
            let (x, y) = to_px(z.re, z.im);
            let _ = write!(points, "{x},{y}");
        }
        let _ = writeln!(
            svg,
            r#"<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1"/>"#
        );
        let _ = writeln!(
            svg,
            r#"<text x="40" y="{}" font-size="13" fill="{color}">j = {j}</text>"#,
            40 + 16 * i
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="230" y="590" font-size="14" fill="black">domain boundaries</text>"#
    );

    // Right panel: log10 errors against j.
    let rows: Vec<_> = report.rows.iter().filter_map(|r| r.as_measured()).collect();
    if !rows.is_empty() {
        let series: Vec<(usize, Vec<(i32, f64)>)> = (0..4)
            .map(|s| {
                (
                    s,
                    rows.iter()
                        .map(|r| {
                            let v = match s {
                                0 => r.bd_sup_err,
                                1 => r.int_sup_err,
                                2 => r.inv_sup_err,
                                _ => r.rho,
                            };
                            (r.j, v.max(1e-300).log10())
                        })
                        .collect(),
                )
            })
            .collect();
        let j_min = rows.first().unwrap().j as f64;
        let j_max = rows.last().unwrap().j as f64;
        let v_min = series
            .iter()
            .flat_map(|(_, pts)| pts.iter().map(|p| p.1))
            .fold(f64::INFINITY, f64::min)
            .floor();
        let v_max = series
            .iter()
            .flat_map(|(_, pts)| pts.iter().map(|p| p.1))
            .fold(f64::NEG_INFINITY, f64::max)
            .ceil();
        let x_px = |j: f64| 680.0 + 460.0 * (j - j_min) / (j_max - j_min).max(1.0);
        let y_px = |v: f64| 540.0 - 500.0 * (v - v_min) / (v_max - v_min).max(1.0);
        // Axes.
        let _ = writeln!(
            svg,
            r#"<line x1="680" y1="540" x2="1140" y2="540" stroke="black" stroke-width="1"/>"#
        );
        let _ = writeln!(
            svg,
            r#"<line x1="680" y1="540" x2="680" y2="40" stroke="black" stroke-width="1"/>"#
        );
        let mut tick = v_min;
        while tick <= v_max + 1e-9 {
            let y = y_px(tick);
            let _ = writeln!(
                svg,
                r#"<text x="630" y="{y}" font-size="11" fill="black">1e{tick}</text>"#
            );
            tick += 1.0;
        }
        for r in &rows {
            let x = x_px(r.j as f64);
            let _ = writeln!(
                svg,
                r#"<text x="{x}" y="558" font-size="11" fill="black">{}</text>"#,
                r.j
            );
        }
        for (s, pts) in &series {
            let (color, label) = SERIES_COLORS[*s];
            let mut path = String::new();
            for (j, v) in pts {
                let _ = write!(path, "{},{} ", x_px(*j as f64), y_px(*v));
            }
            let _ = writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                path.trim_end()
            );
            let _ = writeln!(
                svg,
                r#"<text x="1000" y="{}" font-size="13" fill="{color}">{label}</text>"#,
                60 + 16 * s
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="820" y="590" font-size="14" fill="black">sup errors vs j (log scale)</text>"#
        );
    }
    svg.push_str("</svg>\n");
    svg
}
