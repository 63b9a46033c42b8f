//! Planar primitives for closed Jordan polylines.
//!
//! A [`JordanDomain`] is a positively oriented simple closed polyline with the
//! origin in its interior. Everything downstream (map construction, domain
//! families, the maximum-principle checks) consumes these nodes directly;
//! boundary accuracy is controlled by node count, not by curve primitives.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Planar point.
pub type Point = Complex64;

/// Default geometric tolerance: well above double-precision noise, far below
/// any sane node spacing.
pub const DEFAULT_GEOM_TOL: f64 = 1e-9;

/// Default angle grid for circle scans.
pub const DEFAULT_ANGLE_GRID: usize = 4096;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("polyline needs at least 3 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("nodes {0} and {1} are closer than the geometric tolerance")]
    DegenerateEdge(usize, usize),
    #[error("edges starting at nodes {0} and {1} intersect")]
    SelfIntersection(usize, usize),
    #[error("origin is not strictly interior to the polyline")]
    OriginNotInterior,
    #[error("circle center is not strictly interior")]
    CenterNotInterior,
    #[error("circle radius must be positive")]
    NonpositiveRadius,
    #[error("rotation count must be at least 1, got {0}")]
    InvalidM(usize),
    #[error("boundary crosses the ray at angle {angle} in the sector {count} times")]
    BoundaryNotRadialGraph { angle: f64, count: usize },
    #[error("invalid arc spec: {0}")]
    InvalidArcSpec(String),
}

/// Membership of a point relative to a Jordan polyline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Inside,
    Outside,
    Boundary,
}

/// Positively oriented simple closed polyline with the origin inside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JordanDomain {
    nodes: Vec<Point>,
    tol_geom: f64,
}

impl JordanDomain {
    /// Validate a node list into a domain. Reverses the node order when the
    /// signed area is negative, so the result is always positively oriented.
    pub fn new(nodes: Vec<Point>, tol_geom: f64) -> Result<Self, GeometryError> {
        let mut nodes = nodes;
        if nodes.len() < 3 {
            return Err(GeometryError::TooFewNodes(nodes.len()));
        }
        let n = nodes.len();
        for i in 0..n {
            let j = (i + 1) % n;
            if (nodes[i] - nodes[j]).norm() <= tol_geom {
                return Err(GeometryError::DegenerateEdge(i, j));
            }
        }
        if signed_area(&nodes) < 0.0 {
            nodes.reverse();
        }
        let domain = JordanDomain { nodes, tol_geom };
        domain.check_simple()?;
        if domain.classify(Point::new(0.0, 0.0)) != Classification::Inside {
            return Err(GeometryError::OriginNotInterior);
        }
        Ok(domain)
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn tol_geom(&self) -> f64 {
        self.tol_geom
    }

    pub fn signed_area(&self) -> f64 {
        signed_area(&self.nodes)
    }

    pub fn perimeter(&self) -> f64 {
        let n = self.nodes.len();
        (0..n)
            .map(|i| (self.nodes[(i + 1) % n] - self.nodes[i]).norm())
            .sum()
    }

    /// Longest edge length, used to bound chord-sagitta discretization error.
    pub fn max_edge_len(&self) -> f64 {
        let n = self.nodes.len();
        (0..n)
            .map(|i| (self.nodes[(i + 1) % n] - self.nodes[i]).norm())
            .fold(0.0, f64::max)
    }

    /// O(n^2) pairwise segment test with a bounding-box prefilter.
    fn check_simple(&self) -> Result<(), GeometryError> {
        let n = self.nodes.len();
        let tol = self.tol_geom;
        for i in 0..n {
            let (a, b) = (self.nodes[i], self.nodes[(i + 1) % n]);
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let (c, d) = (self.nodes[j], self.nodes[(j + 1) % n]);
                if adjacent {
                    // Adjacent edges may only meet at the shared node: the far
                    // endpoint of either edge must stay off the other edge.
                    let (far_of_j, far_of_i) = if j == i + 1 { (d, a) } else { (c, b) };
                    if point_segment_distance(far_of_j, a, b) <= tol
                        || point_segment_distance(far_of_i, c, d) <= tol
                    {
                        return Err(GeometryError::SelfIntersection(i, j));
                    }
                    continue;
                }
                // Bounding-box early exit.
                if a.re.max(b.re) + tol < c.re.min(d.re)
                    || c.re.max(d.re) + tol < a.re.min(b.re)
                    || a.im.max(b.im) + tol < c.im.min(d.im)
                    || c.im.max(d.im) + tol < a.im.min(b.im)
                {
                    continue;
                }
                if segments_intersect(a, b, c, d, tol) {
                    return Err(GeometryError::SelfIntersection(i, j));
                }
            }
        }
        Ok(())
    }

    /// Winding-number classification; points within `tol_geom` of the
    /// polyline classify as boundary.
    pub fn classify(&self, z: Point) -> Classification {
        if self.distance_to_boundary(z) <= self.tol_geom {
            return Classification::Boundary;
        }
        if winding_number(&self.nodes, z) != 0 {
            Classification::Inside
        } else {
            Classification::Outside
        }
    }

    /// Distance from `z` to the closed polyline.
    pub fn distance_to_boundary(&self, z: Point) -> f64 {
        let n = self.nodes.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            let d = point_segment_distance(z, self.nodes[i], self.nodes[(i + 1) % n]);
            if d < best {
                best = d;
            }
        }
        best
    }

    /// Closest boundary point to `z` together with its distance.
    pub fn closest_boundary_point(&self, z: Point) -> (f64, Point) {
        let n = self.nodes.len();
        let mut best = (f64::INFINITY, self.nodes[0]);
        for i in 0..n {
            let p = project_on_segment(z, self.nodes[i], self.nodes[(i + 1) % n]);
            let d = (z - p).norm();
            if d < best.0 {
                best = (d, p);
            }
        }
        best
    }

    /// Boundary samples uniform in arc length, walking the edges in order.
    pub fn boundary_samples(&self, count: usize) -> Vec<Point> {
        let n = self.nodes.len();
        let perimeter = self.perimeter();
        let step = perimeter / count.max(1) as f64;
        let mut out = Vec::with_capacity(count);
        let mut edge = 0usize;
        let mut along = 0.0f64;
        let mut edge_len = (self.nodes[1 % n] - self.nodes[0]).norm();
        for _ in 0..count {
            while along > edge_len {
                along -= edge_len;
                edge = (edge + 1) % n;
                edge_len = (self.nodes[(edge + 1) % n] - self.nodes[edge]).norm();
            }
            let a = self.nodes[edge];
            let b = self.nodes[(edge + 1) % n];
            out.push(a + (b - a) * (along / edge_len));
            along += step;
        }
        out
    }

    /// Scan `circle(z0, r)` on a uniform angle grid for maximal arcs lying
    /// outside the closure of the domain. Returns the longest such arc, its
    /// measured length, and the least integer `m` with `2*pi*r/m <= length`,
    /// or `None` when no grid point is outside the closure.
    pub fn free_arc_on_circle(
        &self,
        z0: Point,
        r: f64,
        angle_grid: usize,
    ) -> Result<Option<FreeArc>, GeometryError> {
        if r <= 0.0 {
            return Err(GeometryError::NonpositiveRadius);
        }
        if self.classify(z0) != Classification::Inside {
            return Err(GeometryError::CenterNotInterior);
        }
        let n = angle_grid.max(64);
        let dtheta = std::f64::consts::TAU / n as f64;
        let outside: Vec<bool> = (0..n)
            .map(|i| {
                let theta = i as f64 * dtheta;
                let z = z0 + Point::from_polar(r, theta);
                self.classify(z) == Classification::Outside
            })
            .collect();
        if outside.iter().all(|&b| !b) {
            return Ok(None);
        }
        if outside.iter().all(|&b| b) {
            let length = std::f64::consts::TAU * r;
            return Ok(Some(FreeArc {
                start_angle: 0.0,
                end_angle: std::f64::consts::TAU,
                length,
                m: 1,
            }));
        }
        // Longest circular run of outside points.
        let mut best = (0usize, 0usize); // (start index, cell count)
        let mut i = 0usize;
        while i < n {
            if outside[i] && !outside[(i + n - 1) % n] {
                let mut len = 0usize;
                while outside[(i + len) % n] {
                    len += 1;
                }
                if len > best.1 {
                    best = (i, len);
                }
                i += len;
            } else {
                i += 1;
            }
        }
        let (start, cells) = best;
        // The run's endpoints are inside the true arc, so (cells - 1) grid
        // steps underestimate its length; m is conservative by one cell.
        let length = (cells.saturating_sub(1)) as f64 * dtheta * r;
        if length <= 0.0 {
            return Ok(None);
        }
        let m = (std::f64::consts::TAU * r / length).ceil() as usize;
        Ok(Some(FreeArc {
            start_angle: start as f64 * dtheta,
            end_angle: (start + cells - 1) as f64 * dtheta,
            length,
            m: m.max(1),
        }))
    }
}

/// Maximal free (outside-the-closure) arc found on a circle scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeArc {
    pub start_angle: f64,
    pub end_angle: f64,
    pub length: f64,
    pub m: usize,
}

/// Circular arc on the unit circle together with the sector-neighborhood it
/// pins down: the arc is `{e^{i t} : |t - center_angle| < half_width}` and the
/// neighborhood is `{z : |arg z - center_angle| < half_width + u_margin,
/// ||z| - 1| < u_depth}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcSpec {
    pub center_angle: f64,
    pub half_width: f64,
    pub u_margin: f64,
    pub u_depth: f64,
}

impl ArcSpec {
    pub fn new(
        center_angle: f64,
        half_width: f64,
        u_margin: f64,
        u_depth: f64,
    ) -> Result<Self, GeometryError> {
        let spec = ArcSpec {
            center_angle,
            half_width,
            u_margin,
            u_depth,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        if !(self.half_width > 0.0 && self.half_width < std::f64::consts::PI) {
            return Err(GeometryError::InvalidArcSpec(
                "half_width must lie in (0, pi)".into(),
            ));
        }
        if self.u_margin <= 0.0 {
            return Err(GeometryError::InvalidArcSpec("u_margin must be > 0".into()));
        }
        if !(self.u_depth > 0.0 && self.u_depth < 1.0) {
            return Err(GeometryError::InvalidArcSpec(
                "u_depth must lie in (0, 1)".into(),
            ));
        }
        if self.half_width + self.u_margin >= std::f64::consts::PI {
            return Err(GeometryError::InvalidArcSpec(
                "half_width + u_margin must be < pi".into(),
            ));
        }
        Ok(())
    }

    /// Angular half-extent of the sector neighborhood.
    pub fn sector_half_width(&self) -> f64 {
        self.half_width + self.u_margin
    }

    /// True when `angle` lies in the sector neighborhood (mod 2 pi).
    pub fn sector_contains(&self, angle: f64) -> bool {
        angle_distance(angle, self.center_angle) < self.sector_half_width()
    }
}

/// Smallest absolute angular distance between two angles.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let mut d = (a - b) % std::f64::consts::TAU;
    if d < -std::f64::consts::PI {
        d += std::f64::consts::TAU;
    }
    if d > std::f64::consts::PI {
        d -= std::f64::consts::TAU;
    }
    d.abs()
}

/// Boundary samples of the intersection of `m` rotated copies of the domain
/// (rotations by `2*pi*k/m` about the origin). Samples each copy's boundary
/// and keeps a sample iff it is inside-or-boundary of every other copy; the
/// boundary of the intersection is contained in the union of the boundaries,
/// so this covers it up to grid resolution.
pub fn rotated_intersection_samples(
    domain: &JordanDomain,
    m: usize,
    samples_per_copy: usize,
) -> Result<Vec<Point>, GeometryError> {
    if m < 1 {
        return Err(GeometryError::InvalidM(m));
    }
    let base = domain.boundary_samples(samples_per_copy.max(domain.nodes().len()));
    if m == 1 {
        return Ok(base);
    }
    let mut out = Vec::new();
    for k in 0..m {
        let rot = Point::from_polar(1.0, std::f64::consts::TAU * k as f64 / m as f64);
        for &b in &base {
            let s = rot * b;
            let keep = (0..m).filter(|&kp| kp != k).all(|kp| {
                let back = Point::from_polar(1.0, -std::f64::consts::TAU * kp as f64 / m as f64);
                domain.classify(back * s) != Classification::Outside
            });
            if keep {
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// Sup over the sector neighborhood of `|radial boundary distance - 1|`.
/// A small value certifies, discretely, that the domain coincides with the
/// unit disk on the neighborhood of the arc.
pub fn circle_agreement_sup(
    domain: &JordanDomain,
    arcspec: &ArcSpec,
    angle_grid: usize,
) -> Result<f64, GeometryError> {
    arcspec.validate()?;
    let half = arcspec.sector_half_width();
    let n = angle_grid.max(64);
    let mut sup: f64 = 0.0;
    for i in 0..n {
        let theta = arcspec.center_angle - half + 2.0 * half * (i as f64 + 0.5) / n as f64;
        let r = radial_boundary_distance(domain, theta)?;
        sup = sup.max((r - 1.0).abs());
    }
    Ok(sup)
}

/// Unique crossing radius of the boundary along the ray at `theta`, erroring
/// when the boundary is not a radial graph there.
fn radial_boundary_distance(domain: &JordanDomain, theta: f64) -> Result<f64, GeometryError> {
    let dir = Point::from_polar(1.0, theta);
    let nodes = domain.nodes();
    let n = nodes.len();
    let tol = domain.tol_geom().max(1e-12);
    let mut hits: Vec<f64> = Vec::new();
    for i in 0..n {
        let a = nodes[i];
        let b = nodes[(i + 1) % n];
        if let Some(t) = ray_segment_intersection(dir, a, b) {
            // Deduplicate hits at shared nodes of adjacent edges.
            if !hits.iter().any(|&h| (h - t).abs() <= 16.0 * tol.max(1e-12)) {
                hits.push(t);
            }
        }
    }
    match hits.len() {
        1 => Ok(hits[0]),
        count => Err(GeometryError::BoundaryNotRadialGraph {
            angle: theta,
            count,
        }),
    }
}

/// Intersection parameter `t >= 0` of the ray `t * dir` with segment `[a, b]`,
/// if any. Parallel non-crossing configurations return `None`.
fn ray_segment_intersection(dir: Point, a: Point, b: Point) -> Option<f64> {
    // Solve t * dir = a + s * (b - a) by crossing with each direction.
    let e = b - a;
    let denom = cross(dir, e);
    if denom.abs() < 1e-15 {
        return None;
    }
    let s = cross(a, dir) / denom;
    if !(0.0..=1.0).contains(&s) {
        return None;
    }
    let t = cross(a, e) / denom;
    if t >= 0.0 {
        Some(t)
    } else {
        None
    }
}

fn cross(a: Point, b: Point) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Shoelace signed area of the closed polyline.
pub fn signed_area(nodes: &[Point]) -> f64 {
    let n = nodes.len();
    0.5 * (0..n)
        .map(|i| cross(nodes[i], nodes[(i + 1) % n]))
        .sum::<f64>()
}

/// Winding number of the closed polyline around `z` (0 means outside).
pub fn winding_number(nodes: &[Point], z: Point) -> i32 {
    let n = nodes.len();
    let mut wn = 0i32;
    for i in 0..n {
        let a = nodes[i];
        let b = nodes[(i + 1) % n];
        if a.im <= z.im {
            if b.im > z.im && cross(b - a, z - a) > 0.0 {
                wn += 1;
            }
        } else if b.im <= z.im && cross(b - a, z - a) < 0.0 {
            wn -= 1;
        }
    }
    wn
}

fn project_on_segment(z: Point, a: Point, b: Point) -> Point {
    let e = b - a;
    let len2 = e.norm_sqr();
    if len2 == 0.0 {
        return a;
    }
    let t = ((z - a).re * e.re + (z - a).im * e.im) / len2;
    a + e * t.clamp(0.0, 1.0)
}

pub fn point_segment_distance(z: Point, a: Point, b: Point) -> f64 {
    (z - project_on_segment(z, a, b)).norm()
}

/// Proper or improper (touching within `tol`) intersection of two segments.
fn segments_intersect(a: Point, b: Point, c: Point, d: Point, tol: f64) -> bool {
    let d1 = cross(b - a, c - a);
    let d2 = cross(b - a, d - a);
    let d3 = cross(d - c, a - c);
    let d4 = cross(d - c, b - c);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    // Near-degenerate: any endpoint within tol of the other segment.
    point_segment_distance(c, a, b) <= tol
        || point_segment_distance(d, a, b) <= tol
        || point_segment_distance(a, c, d) <= tol
        || point_segment_distance(b, c, d) <= tol
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(re: f64, im: f64) -> Point {
        Point::new(re, im)
    }

    fn square(scale: f64) -> Vec<Point> {
        vec![
            pt(scale, scale),
            pt(-scale, scale),
            pt(-scale, -scale),
            pt(scale, -scale),
        ]
    }

    #[test]
    fn validates_ccw_square() {
        let d = JordanDomain::new(square(2.0), 1e-12).unwrap();
        assert!(d.signed_area() > 0.0);
        assert_eq!(d.nodes().len(), 4);
    }

    #[test]
    fn rejects_bowtie() {
        let nodes = vec![pt(1.0, 1.0), pt(-1.0, -1.0), pt(1.0, -1.0), pt(-1.0, 1.0)];
        match JordanDomain::new(nodes, 1e-12) {
            Err(GeometryError::SelfIntersection(_, _)) => {}
            other => panic!("expected self-intersection, got {other:?}"),
        }
    }

    #[test]
    fn reverses_clockwise_square() {
        let mut nodes = square(2.0);
        nodes.reverse();
        let d = JordanDomain::new(nodes, 1e-12).unwrap();
        assert!(d.signed_area() > 0.0);
    }

    #[test]
    fn rejects_too_few_and_degenerate() {
        assert_eq!(
            JordanDomain::new(vec![pt(1.0, 0.0), pt(0.0, 1.0)], 1e-9),
            Err(GeometryError::TooFewNodes(2))
        );
        let nodes = vec![
            pt(1.0, 1.0),
            pt(1.0, 1.0 + 1e-12),
            pt(-1.0, 1.0),
            pt(0.0, -1.0),
        ];
        assert!(matches!(
            JordanDomain::new(nodes, 1e-9),
            Err(GeometryError::DegenerateEdge(0, 1))
        ));
    }

    #[test]
    fn rejects_origin_outside() {
        let nodes: Vec<Point> = square(1.0).iter().map(|z| z + pt(5.0, 0.0)).collect();
        assert_eq!(
            JordanDomain::new(nodes, 1e-9),
            Err(GeometryError::OriginNotInterior)
        );
    }

    #[test]
    fn classify_unit_square() {
        let d = JordanDomain::new(square(1.0), 1e-9).unwrap();
        assert_eq!(d.classify(pt(0.0, 0.0)), Classification::Inside);
        assert_eq!(d.classify(pt(2.0, 0.0)), Classification::Outside);
        assert_eq!(d.classify(pt(1.0, 0.0)), Classification::Boundary);
        assert_eq!(d.classify(pt(1.0, 1.0)), Classification::Boundary);
    }

    #[test]
    fn classification_matches_winding_sign_off_boundary() {
        let d = JordanDomain::new(square(1.0), 1e-9).unwrap();
        let mut checked = 0;
        for i in -12..=12 {
            for j in -12..=12 {
                let z = pt(i as f64 * 0.17, j as f64 * 0.17);
                if d.distance_to_boundary(z) <= 1e-6 {
                    continue;
                }
                let inside = winding_number(d.nodes(), z) != 0;
                let cls = d.classify(z);
                assert_eq!(
                    inside,
                    cls == Classification::Inside,
                    "winding/classification mismatch at {z}"
                );
                checked += 1;
            }
        }
        assert!(checked > 100);
    }

    #[test]
    fn validate_is_idempotent() {
        let d = JordanDomain::new(square(2.0), 1e-12).unwrap();
        let d2 = JordanDomain::new(d.nodes().to_vec(), d.tol_geom()).unwrap();
        assert_eq!(d, d2);
    }

    #[test]
    fn free_arc_none_on_large_disk() {
        // 64-gon of radius 2 fully contains the unit circle.
        let nodes: Vec<Point> = (0..64)
            .map(|k| Point::from_polar(2.0, std::f64::consts::TAU * k as f64 / 64.0))
            .collect();
        let d = JordanDomain::new(nodes, 1e-9).unwrap();
        assert_eq!(d.free_arc_on_circle(pt(0.0, 0.0), 1.0, 256).unwrap(), None);
    }

    #[test]
    fn free_arc_errors() {
        let d = JordanDomain::new(square(1.0), 1e-9).unwrap();
        assert_eq!(
            d.free_arc_on_circle(pt(0.0, 0.0), -1.0, 256),
            Err(GeometryError::NonpositiveRadius)
        );
        assert_eq!(
            d.free_arc_on_circle(pt(5.0, 0.0), 1.0, 256),
            Err(GeometryError::CenterNotInterior)
        );
    }

    #[test]
    fn rotated_intersection_identity_for_m1() {
        let d = JordanDomain::new(square(1.0), 1e-9).unwrap();
        let samples = rotated_intersection_samples(&d, 1, 100).unwrap();
        assert_eq!(samples.len(), 100);
        for s in samples {
            assert!(d.distance_to_boundary(s) <= 1e-12);
        }
    }

    #[test]
    fn rotated_intersection_symmetric_domain_is_unchanged() {
        // Square is invariant under rotation by pi/2 = 2 pi / 4.
        let d = JordanDomain::new(square(1.0), 1e-9).unwrap();
        let samples = rotated_intersection_samples(&d, 4, 200).unwrap();
        assert!(!samples.is_empty());
        for s in &samples {
            assert!(
                d.distance_to_boundary(*s) <= 1e-9,
                "sample {s} should sit on the boundary of the invariant domain"
            );
        }
    }

    #[test]
    fn rotated_intersection_rejects_zero_m() {
        let d = JordanDomain::new(square(1.0), 1e-9).unwrap();
        assert_eq!(
            rotated_intersection_samples(&d, 0, 10),
            Err(GeometryError::InvalidM(0))
        );
    }

    #[test]
    fn circle_agreement_on_polygonal_disk() {
        let n = 2048;
        let nodes: Vec<Point> = (0..n)
            .map(|k| Point::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64))
            .collect();
        let d = JordanDomain::new(nodes, 1e-9).unwrap();
        let arc = ArcSpec::new(0.0, 1.0, 0.2, 0.2).unwrap();
        let sup = circle_agreement_sup(&d, &arc, 512).unwrap();
        // Chord sagitta bound for this node count.
        let sagitta = (std::f64::consts::TAU / n as f64).powi(2) / 8.0;
        assert!(sup <= sagitta * 1.5, "sup {sup} vs sagitta {sagitta}");
    }

    #[test]
    fn circle_agreement_detects_non_radial_boundary() {
        // Square with a slot from the top edge dipping below the positive
        // x-axis: rays near angle 0 cross the boundary three times.
        let nodes = vec![
            pt(2.0, -2.0),
            pt(2.0, 2.0),
            pt(1.05, 2.0),
            pt(1.05, -0.3),
            pt(0.95, -0.3),
            pt(0.95, 2.0),
            pt(-2.0, 2.0),
            pt(-2.0, -2.0),
        ];
        let d = JordanDomain::new(nodes, 1e-9).unwrap();
        let arc = ArcSpec::new(0.0, 0.3, 0.1, 0.2).unwrap();
        match circle_agreement_sup(&d, &arc, 128) {
            Err(GeometryError::BoundaryNotRadialGraph { .. }) => {}
            other => panic!("expected radial-graph violation, got {other:?}"),
        }
    }

    #[test]
    fn angle_distance_wraps() {
        assert!((angle_distance(0.1, std::f64::consts::TAU - 0.1) - 0.2).abs() < 1e-12);
        assert!((angle_distance(3.0, -3.0) - (std::f64::consts::TAU - 6.0)).abs() < 1e-12);
    }
}
