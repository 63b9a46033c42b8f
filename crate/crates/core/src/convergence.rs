//! Convergence metrics for normalized maps on a shrinking domain family:
//! interior and boundary sup-errors against the identity, inverse-map errors,
//! and a discrete boundary equicontinuity modulus.
//!
//! Every experiment first measures the same metrics on a polygonal disk at
//! the family's node count; those values are the discretization floor that
//! separates theorem behavior from numerics.

use crate::conformal::{
    build_geodesic_map, ConformalError, ConformalMap, DEFAULT_DERIV_NODES, DEFAULT_DERIV_RADIUS,
};
use crate::domains::{
    check_hypotheses, inscribed_disk_radius, make_unit_disk, DomainError, DomainFamily,
    HypothesisReport,
};
use crate::geometry::{angle_distance, Point};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConvergenceError {
    #[error("compact sub-arc must sit strictly inside the family arc")]
    CompactNotInArc,
    #[error("a node of the compact arc deviates from the unit circle by {deviation:.3e}")]
    CompactNotOnCircle { deviation: f64 },
    #[error(transparent)]
    Conformal(#[from] ConformalError),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// Sub-arc of the unit circle: `{e^{i t} : |t - center_angle| <= half_width}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompactArc {
    pub center_angle: f64,
    pub half_width: f64,
}

/// Where and how finely convergence is measured.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceConfig {
    /// Radius of the closed interior compact.
    pub interior_radius: f64,
    /// Grid points per axis over the interior compact.
    pub interior_grid: usize,
    /// Compact boundary sub-arc, strictly inside the family arc.
    pub boundary_compact: CompactArc,
    /// Angle samples across the compact arc for the offset cross-check.
    pub boundary_grid: usize,
    /// Interior-offset cross-check evaluates at radius 1 - boundary_offset.
    pub boundary_offset: f64,
    /// Angular spacing defining equicontinuity pairs.
    pub pair_delta: f64,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        ConvergenceConfig {
            interior_radius: 0.9,
            interior_grid: 33,
            boundary_compact: CompactArc {
                center_angle: 0.0,
                half_width: std::f64::consts::FRAC_PI_4,
            },
            boundary_grid: 256,
            boundary_offset: 1e-4,
            pair_delta: 0.05,
        }
    }
}

/// Running maximum that remembers where it was attained; ties keep the first
/// location.
#[derive(Debug, Clone, Copy)]
struct SupTracker<L> {
    sup: f64,
    at: L,
}

impl<L: Copy> SupTracker<L> {
    fn new(at: L) -> Self {
        SupTracker { sup: 0.0, at }
    }

    fn offer(&mut self, value: f64, at: L) {
        if value > self.sup {
            self.sup = value;
            self.at = at;
        }
    }
}

fn interior_detail(
    map: &ConformalMap,
    cfg: &ConvergenceConfig,
) -> Result<(f64, Point), ConvergenceError> {
    let r = cfg.interior_radius;
    if r == 0.0 {
        let origin = Point::new(0.0, 0.0);
        return Ok((map.eval(origin)?.norm(), origin));
    }
    let n = cfg.interior_grid.max(2);
    let mut sup = SupTracker::new(Point::new(0.0, 0.0));
    for i in 0..n {
        for j in 0..n {
            let z = Point::new(
                -r + 2.0 * r * i as f64 / (n - 1) as f64,
                -r + 2.0 * r * j as f64 / (n - 1) as f64,
            );
            if z.norm() > r {
                continue;
            }
            sup.offer((map.eval(z)? - z).norm(), z);
        }
    }
    Ok((sup.sup, sup.at))
}

/// Max over the square grid intersected with the closed interior compact of
/// `|f(z) - z|`.
pub fn interior_sup_error(
    map: &ConformalMap,
    cfg: &ConvergenceConfig,
) -> Result<f64, ConvergenceError> {
    interior_detail(map, cfg).map(|(sup, _)| sup)
}

fn inverse_detail(
    map: &ConformalMap,
    cfg: &ConvergenceConfig,
) -> Result<(f64, Point), ConvergenceError> {
    let r = cfg.interior_radius;
    let n = cfg.interior_grid.max(2);
    let mut sup = SupTracker::new(Point::new(0.0, 0.0));
    for i in 0..n {
        for j in 0..n {
            let w = Point::new(
                -r + 2.0 * r * i as f64 / (n - 1) as f64,
                -r + 2.0 * r * j as f64 / (n - 1) as f64,
            );
            if w.norm() > r {
                continue;
            }
            sup.offer((map.eval_inverse(w)? - w).norm(), w);
        }
    }
    Ok((sup.sup, sup.at))
}

/// Max over the grid of `|g(w) - w|` for the backward evaluation.
pub fn inverse_sup_error(
    map: &ConformalMap,
    cfg: &ConvergenceConfig,
) -> Result<f64, ConvergenceError> {
    inverse_detail(map, cfg).map(|(sup, _)| sup)
}

/// Indices of domain nodes whose angle lies in the compact arc, checked to
/// sit on the unit circle.
fn compact_node_indices(
    map: &ConformalMap,
    cfg: &ConvergenceConfig,
) -> Result<Vec<usize>, ConvergenceError> {
    let arc = cfg.boundary_compact;
    let mut out = Vec::new();
    let tol = 1e-6 + map.domain().max_edge_len().powi(2);
    for (idx, z) in map.domain().nodes().iter().enumerate() {
        if angle_distance(z.arg(), arc.center_angle) <= arc.half_width {
            let deviation = (z.norm() - 1.0).abs();
            if deviation > tol {
                return Err(ConvergenceError::CompactNotOnCircle { deviation });
            }
            out.push(idx);
        }
    }
    Ok(out)
}

/// Boundary node sup with its node index, offset sup with its angle.
type BoundaryDetail = ((f64, usize), (f64, f64));

fn boundary_detail(
    map: &ConformalMap,
    cfg: &ConvergenceConfig,
) -> Result<BoundaryDetail, ConvergenceError> {
    let indices = compact_node_indices(map, cfg)?;
    let mut node_sup = SupTracker::new(0usize);
    for idx in indices {
        let node = map.domain().nodes()[idx];
        let target = node / node.norm();
        node_sup.offer((map.boundary_value(idx)? - target).norm(), idx);
    }
    let arc = cfg.boundary_compact;
    let n = cfg.boundary_grid.max(2);
    let rho = 1.0 - cfg.boundary_offset;
    let mut offset_sup = SupTracker::new(arc.center_angle);
    for i in 0..n {
        let theta =
            arc.center_angle - arc.half_width + 2.0 * arc.half_width * i as f64 / (n - 1) as f64;
        let z = Point::from_polar(rho, theta);
        offset_sup.offer((map.eval(z)? - z).norm(), theta);
    }
    Ok(((node_sup.sup, node_sup.at), (offset_sup.sup, offset_sup.at)))
}

/// Boundary sup-error at the compact-arc nodes via the stored boundary
/// correspondence, plus the interior-offset cross-check.
pub fn boundary_sup_error(
    map: &ConformalMap,
    cfg: &ConvergenceConfig,
) -> Result<(f64, f64), ConvergenceError> {
    boundary_detail(map, cfg).map(|((node_sup, _), (offset_sup, _))| (node_sup, offset_sup))
}

/// Discrete Lipschitz-type modulus on the compact arc: max over node pairs at
/// angular distance at most `pair_delta` of the image distance, divided by
/// `pair_delta`. Falls back to the single widest pair when the arc is
/// narrower than the pair spacing.
pub fn equicontinuity_modulus(
    map: &ConformalMap,
    cfg: &ConvergenceConfig,
) -> Result<f64, ConvergenceError> {
    let mut indices = compact_node_indices(map, cfg)?;
    indices.sort_by(|&a, &b| {
        let na = map.domain().nodes()[a].arg();
        let nb = map.domain().nodes()[b].arg();
        na.partial_cmp(&nb).unwrap()
    });
    if indices.len() < 2 {
        return Ok(0.0);
    }
    let angles: Vec<f64> = indices
        .iter()
        .map(|&i| map.domain().nodes()[i].arg())
        .collect();
    let mut best: f64 = 0.0;
    let mut any_pair = false;
    for a in 0..indices.len() {
        for b in (a + 1)..indices.len() {
            if (angles[b] - angles[a]).abs() > cfg.pair_delta {
                break;
            }
            any_pair = true;
            let img = (map.boundary_value(indices[a])? - map.boundary_value(indices[b])?).norm();
            best = best.max(img / cfg.pair_delta);
        }
    }
    if !any_pair {
        // Use the single widest pair.
        let img = (map.boundary_value(indices[0])?
            - map.boundary_value(*indices.last().unwrap())?)
        .norm();
        best = img / cfg.pair_delta;
    }
    Ok(best)
}

/// Check that the recorded boundary images wind monotonically once around the
/// circle (the discrete form of a circle homeomorphism).
pub fn boundary_images_cyclically_monotone(map: &ConformalMap) -> bool {
    let images = map.node_images();
    let n = images.len();
    if n < 3 {
        return true;
    }
    let mut total = 0.0;
    let mut negatives = 0usize;
    for i in 0..n {
        let a = images[i].arg();
        let b = images[(i + 1) % n].arg();
        let mut d = b - a;
        while d < 0.0 {
            d += std::f64::consts::TAU;
        }
        while d >= std::f64::consts::TAU {
            d -= std::f64::consts::TAU;
        }
        total += d;
        if d > std::f64::consts::PI {
            // A step backwards shows up as a jump close to a full turn.
            negatives += 1;
        }
    }
    negatives == 0 && (total - std::f64::consts::TAU).abs() < 1e-6
}

/// One measured row of the experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub j: i32,
    pub width: f64,
    pub rho: f64,
    pub int_sup_err: f64,
    pub bd_sup_err: f64,
    pub bd_offset_err: f64,
    pub inv_sup_err: f64,
    pub equicont_mod: f64,
    pub fprime0: (f64, f64),
    pub build_ms: u64,
    pub eval_ms: u64,
    pub hypotheses: HypothesisReport,
    pub monotone_boundary: bool,
    pub argmax: RowArgmax,
}

/// Where each sup was attained; ties keep the first scan location.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RowArgmax {
    /// Interior grid point of the largest forward error.
    pub int_at: (f64, f64),
    /// Node index of the largest boundary-correspondence error.
    pub bd_node: usize,
    /// Angle of the largest offset-ring error.
    pub bd_offset_angle: f64,
    /// Disk grid point of the largest inverse error.
    pub inv_at: (f64, f64),
}

/// Row that failed its hypothesis gate or its build, with the reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "outcome")]
pub enum RowOutcome {
    Measured(ConvergenceRow),
    HypothesisFailed {
        j: i32,
        width: f64,
        hypotheses: HypothesisReport,
    },
    Failed {
        j: i32,
        width: f64,
        error: String,
    },
}

impl RowOutcome {
    pub fn j(&self) -> i32 {
        match self {
            RowOutcome::Measured(r) => r.j,
            RowOutcome::HypothesisFailed { j, .. } | RowOutcome::Failed { j, .. } => *j,
        }
    }

    pub fn as_measured(&self) -> Option<&ConvergenceRow> {
        match self {
            RowOutcome::Measured(r) => Some(r),
            _ => None,
        }
    }
}

/// Metrics of the polygonal-disk control run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskFloor {
    pub nodes: usize,
    pub int_sup_err: f64,
    pub bd_sup_err: f64,
    pub bd_offset_err: f64,
    pub inv_sup_err: f64,
    pub equicont_mod: f64,
    pub fprime0: (f64, f64),
}

/// Full experiment output: the disk floor and one outcome per index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub floor: DiskFloor,
    pub rows: Vec<RowOutcome>,
    pub kernel_grid_resolution: f64,
}

impl ConvergenceReport {
    pub fn all_hypotheses_pass(&self) -> bool {
        self.rows
            .iter()
            .all(|r| matches!(r, RowOutcome::Measured(_)))
    }
}

struct Measured {
    int_sup: f64,
    bd_sup: f64,
    bd_offset: f64,
    inv_sup: f64,
    equi: f64,
    fp: Point,
    argmax: RowArgmax,
}

fn measure_map(map: &ConformalMap, cfg: &ConvergenceConfig) -> Result<Measured, ConvergenceError> {
    let (int_sup, int_at) = interior_detail(map, cfg)?;
    let ((bd_sup, bd_node), (bd_offset, bd_offset_angle)) = boundary_detail(map, cfg)?;
    let (inv_sup, inv_at) = inverse_detail(map, cfg)?;
    let equi = equicontinuity_modulus(map, cfg)?;
    let fp = map.derivative_at_origin(DEFAULT_DERIV_RADIUS, DEFAULT_DERIV_NODES)?;
    Ok(Measured {
        int_sup,
        bd_sup,
        bd_offset,
        inv_sup,
        equi,
        fp,
        argmax: RowArgmax {
            int_at: (int_at.re, int_at.im),
            bd_node,
            bd_offset_angle,
            inv_at: (inv_at.re, inv_at.im),
        },
    })
}

/// Disk control run at the given node count.
pub fn disk_floor(nodes: usize, cfg: &ConvergenceConfig) -> Result<DiskFloor, ConvergenceError> {
    let disk = make_unit_disk(nodes)?;
    let map = build_geodesic_map(&disk)?.normalize_at_origin()?;
    let m = measure_map(&map, cfg)?;
    Ok(DiskFloor {
        nodes,
        int_sup_err: m.int_sup,
        bd_sup_err: m.bd_sup,
        bd_offset_err: m.bd_offset,
        inv_sup_err: m.inv_sup,
        equicont_mod: m.equi,
        fprime0: (m.fp.re, m.fp.im),
    })
}

/// Run the full experiment: per index generate, gate on the hypotheses,
/// build, normalize, measure. Rows run in parallel and assemble in index
/// order; per-row failures are recorded and the experiment continues.
pub fn run_family_experiment(
    family: &DomainFamily,
    cfg: &ConvergenceConfig,
    kernel_grid: usize,
) -> Result<ConvergenceReport, ConvergenceError> {
    family.validate()?;
    let arc = &family.arcspec;
    let k = cfg.boundary_compact;
    if angle_distance(k.center_angle, arc.center_angle) + k.half_width >= arc.half_width {
        return Err(ConvergenceError::CompactNotInArc);
    }

    let floor = disk_floor(family.nodes, cfg)?;

    let (lo, hi) = family.j_range;
    let indices: Vec<i32> = (lo..=hi).collect();
    let mut resolution = 0.0f64;
    let rows: Vec<RowOutcome> = indices
        .par_iter()
        .map(|&j| {
            let width = family.width_at(j);
            let domain = match family.generate(j) {
                Ok(d) => d,
                Err(e) => {
                    return RowOutcome::Failed {
                        j,
                        width,
                        error: e.to_string(),
                    }
                }
            };
            let hypotheses = check_hypotheses(&domain, &family.arcspec, family.r_bound);
            if !hypotheses.all_pass() {
                return RowOutcome::HypothesisFailed {
                    j,
                    width,
                    hypotheses,
                };
            }
            let t0 = Instant::now();
            let map = match build_geodesic_map(&domain).and_then(|m| m.normalize_at_origin()) {
                Ok(m) => m,
                Err(e) => {
                    return RowOutcome::Failed {
                        j,
                        width,
                        error: e.to_string(),
                    }
                }
            };
            let build_ms = t0.elapsed().as_millis() as u64;
            let t1 = Instant::now();
            let measured = measure_map(&map, cfg);
            let eval_ms = t1.elapsed().as_millis() as u64;
            let (rho, _res) = inscribed_disk_radius(&domain, kernel_grid);
            match measured {
                Ok(m) => RowOutcome::Measured(ConvergenceRow {
                    j,
                    width,
                    rho,
                    int_sup_err: m.int_sup,
                    bd_sup_err: m.bd_sup,
                    bd_offset_err: m.bd_offset,
                    inv_sup_err: m.inv_sup,
                    equicont_mod: m.equi,
                    fprime0: (m.fp.re, m.fp.im),
                    build_ms,
                    eval_ms,
                    hypotheses,
                    monotone_boundary: boundary_images_cyclically_monotone(&map),
                    argmax: m.argmax,
                }),
                Err(e) => RowOutcome::Failed {
                    j,
                    width,
                    error: e.to_string(),
                },
            }
        })
        .collect();
    // Grid resolution of the inscribed-disk search, for the certificate.
    if let Ok(sample) = family.generate(lo) {
        let (_, res) = inscribed_disk_radius(&sample, kernel_grid);
        resolution = res;
    }

    let mut rows = rows;
    rows.sort_by_key(|r| r.j());
    Ok(ConvergenceReport {
        floor,
        rows,
        kernel_grid_resolution: resolution,
    })
}
