//! Rotation-trick maximum principle, end to end: the two-constants style
//! bound, the rotated-intersection construction, the product function, the
//! boundary estimate, and an independent harmonic-measure cross-check.

mod wos;

pub use wos::{harmonic_measure_wos, BoundaryTarget, WosError, WosEstimate, WosParams};

use crate::geometry::{
    rotated_intersection_samples, Classification, FreeArc, GeometryError, JordanDomain, Point,
    DEFAULT_ANGLE_GRID, DEFAULT_GEOM_TOL,
};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use thiserror::Error;

/// Default half-width of the boundary shell on which epsilon is measured.
pub const DEFAULT_SHELL_BAND: f64 = 0.02;
/// Default multiplicative slack absorbing shell and grid discretization in
/// the boundary estimate.
pub const DEFAULT_EQ3_SLACK: f64 = 0.05;

#[derive(Debug, Error, PartialEq)]
pub enum LindelofError {
    #[error("epsilon must satisfy 0 < eps <= M, got eps = {eps}, M = {m_bound}")]
    InvalidOrder { eps: f64, m_bound: f64 },
    #[error("rotation order must be at least 1")]
    InvalidM,
    #[error("no interior samples found in the boundary shell")]
    EmptyShell,
    #[error("hypothesis not met: free arc length {length:.6} is below 2 pi r / m = {required:.6}")]
    HypothesisNotMet { length: f64, required: f64 },
    #[error("no free arc found on the circle")]
    NoFreeArc,
    #[error("instance center is not strictly interior")]
    CenterNotInterior,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// The bound `(eps * M^(m-1))^(1/m)`; for `m = 1` it degenerates to the
/// plain maximum principle.
pub fn lindelof_bound(eps: f64, m_bound: f64, m: usize) -> Result<f64, LindelofError> {
    if m < 1 {
        return Err(LindelofError::InvalidM);
    }
    if eps.is_nan() || eps <= 0.0 || eps > m_bound {
        return Err(LindelofError::InvalidOrder { eps, m_bound });
    }
    Ok((eps * m_bound.powi(m as i32 - 1)).powf(1.0 / m as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFunctionKind {
    BlaschkeLike,
    Polynomial,
}

/// Entire product `f(z) = scale * prod_k (z - zero_k)`; analytic everywhere,
/// so its modulus over a domain is controlled by dense boundary samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestFunction {
    pub kind: TestFunctionKind,
    pub zeros: Vec<Point>,
    pub scale: f64,
}

impl TestFunction {
    pub fn eval(&self, z: Point) -> Point {
        self.zeros
            .iter()
            .fold(Point::new(self.scale, 0.0), |acc, &zk| acc * (z - zk))
    }

    pub fn abs(&self, z: Point) -> f64 {
        self.eval(z).norm()
    }

    /// Test function in coordinates translated by `-shift`.
    fn translated(&self, shift: Point) -> TestFunction {
        TestFunction {
            kind: self.kind,
            zeros: self.zeros.iter().map(|&zk| zk - shift).collect(),
            scale: self.scale,
        }
    }
}

/// Product over the rotated copies: `prod_k f(e^{2 pi i k/m} z)`.
pub fn product_function_eval(f: &TestFunction, z: Point, m: usize) -> Point {
    (0..m).fold(Point::new(1.0, 0.0), |acc, k| {
        acc * f.eval(Point::from_polar(1.0, TAU * k as f64 / m as f64) * z)
    })
}

/// Measured instance of the rotation-trick bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LindelofInstance {
    pub domain: JordanDomain,
    pub z0: Point,
    pub r: f64,
    pub m: usize,
    pub arc: FreeArc,
    pub f_desc: TestFunction,
    pub eps_hat: f64,
    pub m_hat: f64,
    pub shell_band: f64,
}

/// Measure `eps_hat` (sup of |f| over interior points within `shell_band` of
/// the boundary and inside the circle of radius `r` about `z0`) and `M_hat`
/// (sup over dense boundary samples; interior shell values are folded in as
/// valid lower bounds for the domain supremum).
pub fn measure_eps_m(
    domain: &JordanDomain,
    z0: Point,
    r: f64,
    shell_band: f64,
    f: &TestFunction,
    samples: usize,
) -> Result<(f64, f64), LindelofError> {
    let boundary = boundary_samples_with_inward_normals(domain, samples.max(256));
    let mut eps_hat: f64 = f64::NEG_INFINITY;
    let mut m_hat: f64 = f64::NEG_INFINITY;
    let mut shell_count = 0usize;
    for &(b, normal) in &boundary {
        m_hat = m_hat.max(f.abs(b));
        // Geometrically spaced depths approach the boundary limit from
        // inside, so the measured sup tracks the boundary supremum.
        for k in 0..=10 {
            let depth = shell_band * 0.5f64.powi(k);
            let s = b + normal * depth;
            if (s - z0).norm() < r && domain.classify(s) == Classification::Inside {
                eps_hat = eps_hat.max(f.abs(s));
                shell_count += 1;
            }
        }
    }
    if shell_count == 0 {
        return Err(LindelofError::EmptyShell);
    }
    m_hat = m_hat.max(eps_hat);
    Ok((eps_hat, m_hat))
}

/// Uniform-by-arclength boundary samples paired with inward unit normals
/// (interior lies on the left of the positively oriented polyline).
fn boundary_samples_with_inward_normals(
    domain: &JordanDomain,
    count: usize,
) -> Vec<(Point, Point)> {
    let nodes = domain.nodes();
    let n = nodes.len();
    let perimeter = domain.perimeter();
    let step = perimeter / count as f64;
    let mut out = Vec::with_capacity(count);
    let mut edge = 0usize;
    let mut along = step * 0.5;
    let mut edge_len = (nodes[1 % n] - nodes[0]).norm();
    for _ in 0..count {
        while along > edge_len {
            along -= edge_len;
            edge = (edge + 1) % n;
            edge_len = (nodes[(edge + 1) % n] - nodes[edge]).norm();
        }
        let a = nodes[edge];
        let b = nodes[(edge + 1) % n];
        let dir = (b - a) / edge_len;
        let inward = Point::new(-dir.im, dir.re);
        out.push((a + dir * along, inward));
        along += step;
    }
    out
}

impl LindelofInstance {
    /// Assemble an instance by scanning for the obstructing arc and measuring
    /// epsilon and M. `m_override` replaces the scanned rotation order when
    /// given; the hypothesis check against the measured arc still applies at
    /// verification time.
    pub fn measure(
        domain: JordanDomain,
        z0: Point,
        r: f64,
        shell_band: f64,
        f_desc: TestFunction,
        m_override: Option<usize>,
        samples: usize,
    ) -> Result<Self, LindelofError> {
        if domain.classify(z0) != Classification::Inside {
            return Err(LindelofError::CenterNotInterior);
        }
        let arc = domain
            .free_arc_on_circle(z0, r, DEFAULT_ANGLE_GRID)?
            .ok_or(LindelofError::NoFreeArc)?;
        let m = m_override.unwrap_or(arc.m);
        if m < 1 {
            return Err(LindelofError::InvalidM);
        }
        let (eps_hat, m_hat) = measure_eps_m(&domain, z0, r, shell_band, &f_desc, samples)?;
        Ok(LindelofInstance {
            domain,
            z0,
            r,
            m,
            arc,
            f_desc,
            eps_hat,
            m_hat,
            shell_band,
        })
    }
}

/// Full verification record for one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub eps_hat: f64,
    pub m_hat: f64,
    pub m: usize,
    pub arc_length: f64,
    pub arc_required: f64,
    pub bound: f64,
    pub f_z0_abs: f64,
    pub conclusion_ok: bool,
    pub eq3_lhs: f64,
    pub eq3_rhs: f64,
    pub eq3_slack: f64,
    pub eq3_ok: bool,
    pub identity_lhs: f64,
    pub identity_rhs: f64,
    pub identity_ok: bool,
    pub containment_ok: bool,
    pub sample_count: usize,
    /// Harmonic measure of the obstructed shell, when the cross-check ran.
    pub omega: Option<WosEstimate>,
    pub two_constants_ok: Option<bool>,
}

impl LemmaReport {
    pub fn all_pass(&self) -> bool {
        self.conclusion_ok && self.eq3_ok && self.identity_ok && self.containment_ok
    }
}

/// Verify the bound, the boundary estimate on the rotated intersection, the
/// product identity at the center, and the containment of the intersection in
/// the circle. The center is translated to the origin internally.
pub fn verify_lemma(
    instance: &LindelofInstance,
    samples: usize,
) -> Result<LemmaReport, LindelofError> {
    let required = TAU * instance.r / instance.m as f64;
    if instance.arc.length < required {
        return Err(LindelofError::HypothesisNotMet {
            length: instance.arc.length,
            required,
        });
    }

    // Translate the center to the origin.
    let shifted_nodes: Vec<Point> = instance
        .domain
        .nodes()
        .iter()
        .map(|&z| z - instance.z0)
        .collect();
    let domain = JordanDomain::new(shifted_nodes, DEFAULT_GEOM_TOL)?;
    let f = instance.f_desc.translated(instance.z0);
    let m = instance.m;

    let bound = lindelof_bound(instance.eps_hat, instance.m_hat, m)?;
    let f_z0_abs = f.abs(Point::new(0.0, 0.0));
    let conclusion_ok = f_z0_abs <= bound;

    // Boundary samples of the intersection of rotated copies, restricted to
    // the circle of radius r: samples beyond it belong to components the
    // maximum principle never sees.
    let all_samples = rotated_intersection_samples(&domain, m, samples)?;
    let r_tol = instance.r * (1.0 + 1e-9);
    let mut eq3_lhs: f64 = 0.0;
    let mut kept = 0usize;
    let mut stray = false;
    for &s in &all_samples {
        if s.norm() <= r_tol {
            eq3_lhs = eq3_lhs.max(product_function_eval(&f, s, m).norm());
            kept += 1;
        } else {
            stray = true;
        }
    }
    let eq3_rhs = instance.m_hat.powi(m as i32 - 1) * instance.eps_hat * (1.0 + DEFAULT_EQ3_SLACK);
    let eq3_ok = kept > 0 && eq3_lhs <= eq3_rhs;

    // Containment: no stray samples, and the circle itself is fully blocked
    // by the rotated copies.
    let mut circle_blocked = true;
    let probe = 1024usize;
    'angles: for i in 0..probe {
        let z = Point::from_polar(instance.r, TAU * i as f64 / probe as f64);
        let in_all = (0..m).all(|k| {
            let back = Point::from_polar(1.0, -TAU * k as f64 / m as f64);
            domain.classify(back * z) != Classification::Outside
        });
        if in_all {
            circle_blocked = false;
            break 'angles;
        }
    }
    let containment_ok = !stray && circle_blocked;

    let identity_lhs = product_function_eval(&f, Point::new(0.0, 0.0), m).norm();
    let identity_rhs = f_z0_abs.powi(m as i32);
    let identity_scale = identity_rhs.max(1e-300);
    let identity_ok = (identity_lhs - identity_rhs).abs() / identity_scale <= 1e-12;

    Ok(LemmaReport {
        eps_hat: instance.eps_hat,
        m_hat: instance.m_hat,
        m,
        arc_length: instance.arc.length,
        arc_required: required,
        bound,
        f_z0_abs,
        conclusion_ok,
        eq3_lhs,
        eq3_rhs,
        eq3_slack: DEFAULT_EQ3_SLACK,
        eq3_ok,
        identity_lhs,
        identity_rhs,
        identity_ok,
        containment_ok,
        sample_count: kept,
        omega: None,
        two_constants_ok: None,
    })
}

/// Two-constants consistency: `eps^omega * M^(1-omega) >= |f(z0)|`, slackened
/// by three standard errors of the measured exponent.
pub fn two_constants_check(eps_hat: f64, m_hat: f64, f_z0_abs: f64, omega: &WosEstimate) -> bool {
    let w = (omega.omega_hat - 3.0 * omega.stderr).clamp(0.0, 1.0);
    eps_hat.powf(w) * m_hat.powf(1.0 - w) >= f_z0_abs
}

/// Disk of radius `outer_r` with a radial wedge over `[notch_lo, notch_hi]`
/// removed down to `inner_r`: a Jordan domain whose closure leaves the arc of
/// the unit circle across the notch free. Used to instantiate the bound.
pub fn sector_notched_disk(
    outer_r: f64,
    notch_lo: f64,
    notch_hi: f64,
    inner_r: f64,
    nodes: usize,
) -> Result<JordanDomain, GeometryError> {
    if !(notch_hi > notch_lo && notch_hi - notch_lo < TAU && inner_r > 0.0 && outer_r > inner_r) {
        return Err(GeometryError::InvalidArcSpec(format!(
            "notched disk needs notch_lo < notch_hi < notch_lo + 2 pi and 0 < inner_r < outer_r, \
             got notch [{notch_lo}, {notch_hi}], radii [{inner_r}, {outer_r}]"
        )));
    }
    let outer_span = TAU - (notch_hi - notch_lo);
    let cap_span = (notch_hi - notch_lo) * inner_r;
    let wall_span = outer_r - inner_r;
    let total = outer_span * outer_r + cap_span + 2.0 * wall_span;
    let budget = nodes.max(64) as f64;
    let n_outer = ((budget * outer_span * outer_r / total).round() as usize).max(8);
    let n_cap = ((budget * cap_span / total).round() as usize).max(8);
    let n_wall = ((budget * wall_span / total).round() as usize).max(4);

    let mut pts: Vec<Point> = Vec::with_capacity(n_outer + n_cap + 2 * n_wall + 4);
    // Outer circle from the notch end, the long way around to the notch start.
    for i in 0..=n_outer {
        let t = i as f64 / n_outer as f64;
        pts.push(Point::from_polar(outer_r, notch_hi + outer_span * t));
    }
    // Wall inward at the notch start.
    for i in 1..=n_wall {
        let t = i as f64 / n_wall as f64;
        pts.push(Point::from_polar(outer_r - wall_span * t, notch_lo));
    }
    // Cap across the notch at the inner radius.
    for i in 1..=n_cap {
        let t = i as f64 / n_cap as f64;
        pts.push(Point::from_polar(
            inner_r,
            notch_lo + (notch_hi - notch_lo) * t,
        ));
    }
    // Wall outward at the notch end, stopping short of the first node.
    for i in 1..n_wall {
        let t = i as f64 / n_wall as f64;
        pts.push(Point::from_polar(inner_r + wall_span * t, notch_hi));
    }
    JordanDomain::new(pts, DEFAULT_GEOM_TOL)
}

/// Zeros equally spaced on the free arc of the unit circle inside the notch.
pub fn zeros_on_arc(notch_lo: f64, notch_hi: f64, count: usize) -> Vec<Point> {
    (0..count)
        .map(|k| {
            let theta = notch_lo + (notch_hi - notch_lo) * (k as f64 + 0.5) / count as f64;
            Point::from_polar(1.0, theta)
        })
        .collect()
}
