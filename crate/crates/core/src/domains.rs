//! Families of Jordan domains shrinking onto the unit disk, hypothesis
//! certification, and the inscribed-disk convergence certificate.
//!
//! Two shapes are generated: a radial finger ("tube") attached to the unit
//! circle whose angular half-width decays geometrically, and a smooth radial
//! bump whose height decays geometrically. Both keep the arc neighborhood on
//! the opposite side untouched so the domain coincides with the disk there.

use crate::geometry::{
    angle_distance, circle_agreement_sup, ArcSpec, Classification, GeometryError, JordanDomain,
    Point, DEFAULT_GEOM_TOL,
};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DomainError {
    #[error("need at least 16 nodes, got {0}")]
    InsufficientNodes(usize),
    #[error("family index {j} outside range [{lo}, {hi}]")]
    IndexOutOfRange { j: i32, lo: i32, hi: i32 },
    #[error("family hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Tube,
    Bump,
}

/// Descriptor producing one Jordan domain per index `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainFamily {
    pub kind: FamilyKind,
    /// Angle at which the perturbation attaches to the unit circle.
    pub attach_angle: f64,
    /// Outward extent of the tube finger, so its outer radius is 1 + length.
    pub length: f64,
    /// Initial angular half-width (tube) or initial bump height (bump).
    pub width0: f64,
    /// Geometric decay of the width: w_j = width0 * decay^j.
    pub decay: f64,
    /// Angular half-width of the bump support.
    pub bump_sigma: f64,
    /// Inclusive index interval.
    pub j_range: (i32, i32),
    /// Target node count per generated domain.
    pub nodes: usize,
    /// Arc and neighborhood on which every domain must agree with the disk.
    pub arcspec: ArcSpec,
    /// Radius of the fixed enclosing disk.
    #[serde(rename = "R")]
    pub r_bound: f64,
}

impl DomainFamily {
    /// Width parameter at index `j` (angular half-width or bump height).
    pub fn width_at(&self, j: i32) -> f64 {
        self.width0 * self.decay.powi(j)
    }

    /// Angular half-extent of the attachment support.
    pub fn support_half_width(&self) -> f64 {
        match self.kind {
            FamilyKind::Tube => self.width0,
            FamilyKind::Bump => self.bump_sigma,
        }
    }

    /// Check the family invariants (support disjoint from the arc
    /// neighborhood, enclosing radius large enough, decay in (0,1)).
    pub fn validate(&self) -> Result<(), DomainError> {
        self.arcspec.validate()?;
        if self.nodes < 16 {
            return Err(DomainError::InsufficientNodes(self.nodes));
        }
        if !(self.decay > 0.0 && self.decay < 1.0) {
            return Err(DomainError::HypothesisViolation(format!(
                "decay must lie in (0, 1), got {}",
                self.decay
            )));
        }
        if self.width0 <= 0.0 {
            return Err(DomainError::HypothesisViolation(
                "width0 must be positive".into(),
            ));
        }
        if self.j_range.0 > self.j_range.1 {
            return Err(DomainError::HypothesisViolation("empty index range".into()));
        }
        let outer = match self.kind {
            FamilyKind::Tube => {
                if self.length <= 0.0 {
                    return Err(DomainError::HypothesisViolation(
                        "tube length must be positive".into(),
                    ));
                }
                1.0 + self.length
            }
            FamilyKind::Bump => {
                if !(self.bump_sigma > 0.0 && self.bump_sigma < PI) {
                    return Err(DomainError::HypothesisViolation(
                        "bump_sigma must lie in (0, pi)".into(),
                    ));
                }
                1.0 + self.width0
            }
        };
        if outer > self.r_bound {
            return Err(DomainError::HypothesisViolation(format!(
                "outer radius {outer} exceeds enclosing radius {}",
                self.r_bound
            )));
        }
        let gap = angle_distance(self.attach_angle, self.arcspec.center_angle)
            - self.support_half_width()
            - self.arcspec.sector_half_width();
        if gap <= 0.0 {
            return Err(DomainError::HypothesisViolation(format!(
                "attachment support overlaps the arc neighborhood (gap {gap:.4})"
            )));
        }
        Ok(())
    }

    /// Generate the domain at index `j`.
    pub fn generate(&self, j: i32) -> Result<JordanDomain, DomainError> {
        if j < self.j_range.0 || j > self.j_range.1 {
            return Err(DomainError::IndexOutOfRange {
                j,
                lo: self.j_range.0,
                hi: self.j_range.1,
            });
        }
        let nodes = match self.kind {
            FamilyKind::Tube => {
                tube_nodes(self.attach_angle, self.width_at(j), self.length, self.nodes)
            }
            FamilyKind::Bump => bump_nodes(
                self.attach_angle,
                self.width_at(j),
                self.bump_sigma,
                self.nodes,
            ),
        };
        Ok(JordanDomain::new(nodes, DEFAULT_GEOM_TOL)?)
    }
}

/// Regular polygon on the unit circle, positively oriented.
pub fn make_unit_disk(nodes: usize) -> Result<JordanDomain, DomainError> {
    if nodes < 16 {
        return Err(DomainError::InsufficientNodes(nodes));
    }
    let pts = (0..nodes)
        .map(|k| Point::from_polar(1.0, TAU * k as f64 / nodes as f64))
        .collect();
    Ok(JordanDomain::new(pts, DEFAULT_GEOM_TOL)?)
}

/// Nodes of the circle-plus-finger boundary. The circle is traversed from
/// `attach + w` the long way around to `attach - w`, then the finger: a
/// radial wall out to radius 1 + len, a circular cap across the attachment
/// angle, and a wall back in. Corners carry a 3-node chamfer of size w/4 so
/// the curve stays simple as w shrinks; node density in the finger is
/// boosted by a factor 4 because its corners dominate map error.
fn tube_nodes(attach: f64, w: f64, len: f64, target: usize) -> Vec<Point> {
    let outer = 1.0 + len;
    let chamfer = (w / 4.0).min(len / 4.0);
    let circle_span = TAU - 2.0 * w;
    let wall_span = len - 2.0 * chamfer;
    let cap_span = (2.0 * w - 2.0 * chamfer / outer).max(w) * outer;

    let circle_len = circle_span;
    let finger_len = 2.0 * wall_span + cap_span;
    let weight = circle_len + 4.0 * finger_len;
    let budget = target.saturating_sub(12).max(16) as f64;
    let n_circle = ((budget * circle_len / weight).round() as usize).max(8);
    let n_wall = ((budget * 4.0 * wall_span / weight).round() as usize).max(2);
    let n_cap = ((budget * 4.0 * cap_span / weight).round() as usize).max(3);

    let mut pts: Vec<Point> = Vec::with_capacity(n_circle + 2 * n_wall + n_cap + 12);

    // Circle section, excluding chamfer arcs at both junctions.
    let th_start = attach + w + chamfer;
    let th_end = attach + TAU - w - chamfer;
    for i in 0..=n_circle {
        let t = i as f64 / n_circle as f64;
        pts.push(Point::from_polar(1.0, th_start + (th_end - th_start) * t));
    }

    // Corner helper: 3-node chamfer = section endpoints plus a midpoint
    // pulled halfway back toward the true corner.
    let rounded = |prev: Point, corner: Point, next: Point| -> Point {
        let m = (prev + next) * 0.5;
        m + (corner - m) * 0.5
    };

    let a_in = attach - w; // wall angle on the circle-end side
    let a_out = attach + w; // wall angle on the start side
    let corner_a1 = Point::from_polar(1.0, a_in);
    let corner_b1 = Point::from_polar(outer, a_in);
    let corner_b2 = Point::from_polar(outer, a_out);
    let corner_a2 = Point::from_polar(1.0, a_out);

    // Chamfer at the circle-to-wall corner.
    let wall1_first = Point::from_polar(1.0 + chamfer, a_in);
    pts.push(rounded(*pts.last().unwrap(), corner_a1, wall1_first));
    // Outgoing wall.
    for i in 0..=n_wall {
        let t = i as f64 / n_wall as f64;
        pts.push(Point::from_polar(1.0 + chamfer + wall_span * t, a_in));
    }
    // Chamfer wall-to-cap.
    let cap_chamfer = chamfer / outer;
    let cap_first = Point::from_polar(outer, a_in + cap_chamfer);
    pts.push(rounded(*pts.last().unwrap(), corner_b1, cap_first));
    // Cap across the attachment angle.
    for i in 0..=n_cap {
        let t = i as f64 / n_cap as f64;
        pts.push(Point::from_polar(
            outer,
            a_in + cap_chamfer + (2.0 * w - 2.0 * cap_chamfer) * t,
        ));
    }
    // Chamfer cap-to-wall.
    let wall2_first = Point::from_polar(outer - chamfer, a_out);
    pts.push(rounded(*pts.last().unwrap(), corner_b2, wall2_first));
    // Incoming wall.
    for i in 0..=n_wall {
        let t = i as f64 / n_wall as f64;
        pts.push(Point::from_polar(outer - chamfer - wall_span * t, a_out));
    }
    // Chamfer wall-to-circle, closing onto the first circle node.
    pts.push(rounded(*pts.last().unwrap(), corner_a2, pts[0]));

    // Start the traversal a quarter turn away from the finger: the opening
    // edge and the terminal junction are the least accurate spots of the
    // composition, and the junction must stay clear of the crowded finger.
    rotate_start(dedup_nodes(pts), attach + PI / 2.0)
}

/// Rotate the closed node list so it starts at the node nearest `angle`.
fn rotate_start(nodes: Vec<Point>, angle: f64) -> Vec<Point> {
    let start = nodes
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            angle_distance(a.arg(), angle)
                .partial_cmp(&angle_distance(b.arg(), angle))
                .unwrap()
        })
        .map(|(i, _)| i)
        .unwrap_or(0);
    let mut out = Vec::with_capacity(nodes.len());
    out.extend_from_slice(&nodes[start..]);
    out.extend_from_slice(&nodes[..start]);
    out
}

/// Smooth compactly supported profile: exp(1 - 1/(1 - t^2)) on |t| < 1.
fn bump_profile(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    }
}

/// Radial graph r(theta) = 1 + eps * psi((theta - attach)/sigma).
fn bump_nodes(attach: f64, eps: f64, sigma: f64, target: usize) -> Vec<Point> {
    let n = target.max(16);
    let pts = (0..n)
        .map(|k| {
            let theta = TAU * k as f64 / n as f64;
            let t = {
                let mut d = (theta - attach) % TAU;
                if d > PI {
                    d -= TAU;
                }
                if d < -PI {
                    d += TAU;
                }
                d / sigma
            };
            Point::from_polar(1.0 + eps * bump_profile(t), theta)
        })
        .collect();
    rotate_start(pts, attach + PI / 2.0)
}

fn dedup_nodes(pts: Vec<Point>) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(pts.len());
    for p in pts {
        if out.last().is_none_or(|&q| (p - q).norm() > 1e-7) {
            out.push(p);
        }
    }
    if out.len() > 1 && (out[0] - *out.last().unwrap()).norm() <= 1e-7 {
        out.pop();
    }
    out
}

/// Result of checking one domain against the varying-domain hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub contains_disk: bool,
    /// Largest outward violation distance of a unit-circle sample.
    pub contains_residual: f64,
    pub inside_enclosing: bool,
    /// max |node| - R, clamped at zero.
    pub enclosing_residual: f64,
    pub agrees_on_arc: bool,
    pub agreement_sup: f64,
    pub agreement_tol: f64,
    /// Set when the boundary failed to be a radial graph over the sector.
    pub radial_graph_violation: bool,
}

impl HypothesisReport {
    pub fn all_pass(&self) -> bool {
        self.contains_disk && self.inside_enclosing && self.agrees_on_arc
    }
}

/// Certify `disk ⊆ domain ⊆ R-disk` and agreement with the circle on the arc
/// neighborhood, discretely: unit-circle samples may sink below the polyline
/// by at most the chord sagitta of the domain's own resolution.
pub fn check_hypotheses(
    domain: &JordanDomain,
    arcspec: &ArcSpec,
    r_bound: f64,
) -> HypothesisReport {
    let sagitta = domain.max_edge_len().powi(2) / 8.0;
    let tol = 1e-6 + sagitta;

    let samples = 4 * domain.nodes().len();
    let mut contains_residual = 0.0f64;
    for k in 0..samples {
        let z = Point::from_polar(1.0, TAU * k as f64 / samples as f64);
        if domain.classify(z) == Classification::Outside {
            contains_residual = contains_residual.max(domain.distance_to_boundary(z));
        }
    }
    let contains_disk = contains_residual <= tol;

    let max_node = domain.nodes().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let enclosing_residual = (max_node - r_bound).max(0.0);
    let inside_enclosing = enclosing_residual <= 1e-9;

    let (agreement_sup, radial_graph_violation) = match circle_agreement_sup(domain, arcspec, 1024)
    {
        Ok(sup) => (sup, false),
        Err(_) => (f64::INFINITY, true),
    };
    let agrees_on_arc = !radial_graph_violation && agreement_sup <= tol;

    HypothesisReport {
        contains_disk,
        contains_residual,
        inside_enclosing,
        enclosing_residual,
        agrees_on_arc,
        agreement_sup,
        agreement_tol: tol,
        radial_graph_violation,
    }
}

/// Per-index inscribed-disk certificate: `rho_j` is the largest radius of a
/// disk lying inside the domain with its center at distance at least
/// `1 + rho_j` from the origin. `rho_j -> 0` certifies that no fixed disk
/// outside the closed unit disk survives in every domain, so the kernel of
/// every subsequence is the unit disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelCertificate {
    pub rows: Vec<(i32, f64)>,
    pub grid_resolution: f64,
    pub not_converging: bool,
}

/// Largest inscribed-disk radius for one domain by grid search over centers.
/// The inscribed radius at a center is its exact distance to the polyline,
/// capped by `|center| - 1` so the disk stays centered outside the unit disk.
pub fn inscribed_disk_radius(domain: &JordanDomain, grid: usize) -> (f64, f64) {
    let r_max = domain.nodes().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let n_r = grid.max(8);
    let n_theta = 4 * grid.max(8);
    let dr = (r_max - 1.0).max(1e-6) / n_r as f64;
    let mut best = 0.0f64;
    for ir in 0..=n_r {
        let r = 1.0 + ir as f64 * dr;
        for it in 0..n_theta {
            let theta = TAU * it as f64 / n_theta as f64;
            let c = Point::from_polar(r, theta);
            if domain.classify(c) != Classification::Inside {
                continue;
            }
            let rho = domain.distance_to_boundary(c).min(r - 1.0);
            if rho > best {
                best = rho;
            }
        }
    }
    let resolution = dr.max(TAU / n_theta as f64 * r_max);
    (best, resolution)
}

/// Run the inscribed-disk search across the family index range.
pub fn kernel_certificate(
    family: &DomainFamily,
    grid: usize,
) -> Result<KernelCertificate, DomainError> {
    let (lo, hi) = family.j_range;
    let mut rows = Vec::new();
    let mut resolution = 0.0f64;
    for j in lo..=hi {
        let domain = family.generate(j)?;
        let (rho, res) = inscribed_disk_radius(&domain, grid);
        resolution = resolution.max(res);
        rows.push((j, rho));
    }
    let first = rows.first().map(|r| r.1).unwrap_or(0.0);
    let last = rows.last().map(|r| r.1).unwrap_or(0.0);
    let not_converging = last > 0.5 * first + resolution;
    Ok(KernelCertificate {
        rows,
        grid_resolution: resolution,
        not_converging,
    })
}
