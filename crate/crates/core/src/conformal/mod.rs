//! Numerical Riemann maps onto the unit disk by composition of closed-form
//! slit maps, with closed-form inverses and explicit boundary correspondence.
//!
//! The builder opens the boundary curve at its first edge, removes one
//! hyperbolic geodesic per node, joins the two curve ends, and applies the
//! Cayley transform. Normalization appends a disk automorphism and a rotation
//! so the map fixes the origin with positive real derivative there.

mod stage;

pub use stage::{slit_params, sqrt_upper, ElementaryMap, NodeTrack, Point, StageError};

use crate::geometry::{Classification, JordanDomain};
use thiserror::Error;

/// Default radius of the quadrature circle for the derivative at the origin.
pub const DEFAULT_DERIV_RADIUS: f64 = 0.25;
/// Default node count of the derivative quadrature.
pub const DEFAULT_DERIV_NODES: usize = 256;

#[derive(Debug, Error, PartialEq)]
pub enum ConformalError {
    #[error("map construction needs at least 16 nodes, got {0}")]
    InsufficientNodes(usize),
    #[error("slit parameter left the upper half-plane at node {node}: {value}")]
    SlitParameterOutOfHalfPlane { node: usize, value: Point },
    #[error("terminal junction point is degenerate (|q| = {q_abs:.3e})")]
    TerminalJunctionDegenerate { q_abs: f64 },
    #[error("terminal orientation probe contradicts the junction sign")]
    TerminalOrientationInconsistent,
    #[error("evaluation point is not strictly inside the domain")]
    PointOutsideDomain,
    #[error("inverse evaluation point is not strictly inside the unit disk")]
    PointOutsideDisk,
    #[error(transparent)]
    Stage(#[from] StageError),
    #[error("quadrature circle of radius {radius} exits the domain")]
    RadiusTooLarge { radius: f64 },
    #[error("origin image |w0| = {w0_abs:.6} is not inside the unit disk")]
    OriginImageOutsideDisk { w0_abs: f64 },
    #[error("node index {index} out of range ({len} nodes)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("map dump parse error: {0}")]
    DumpParse(String),
}

/// Immutable stack of elementary conformal transforms mapping a Jordan
/// polyline domain onto the unit disk, with per-node boundary images.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalMap {
    domain: JordanDomain,
    stages: Vec<ElementaryMap>,
    node_images: Vec<Point>,
    normalized: bool,
}

/// Build the un-normalized geodesic composition for the domain.
///
/// Real affine renormalizations are interleaved whenever the picture scale
/// drifts, so narrow attachments (whose conformal modules inflate the raw
/// scales exponentially) stay within floating-point range; the final affine
/// recenters the image of the origin at `i` so the Cayley output is
/// well-conditioned around the disk center.
pub fn build_geodesic_map(domain: &JordanDomain) -> Result<ConformalMap, ConformalError> {
    let nodes = domain.nodes();
    let n = nodes.len();
    if n < 16 {
        return Err(ConformalError::InsufficientNodes(n));
    }

    let mut stages: Vec<ElementaryMap> = Vec::with_capacity(n + 8);
    let mut track: Vec<NodeTrack> = Vec::with_capacity(n);

    // Open the first edge: z1 -> 0, z0 -> infinity, everything else into the
    // open upper half-plane.
    let initial = ElementaryMap::InitialRoot {
        z0: nodes[0],
        z1: nodes[1],
    };
    track.push(NodeTrack::Pole);
    track.push(NodeTrack::Rail(0.0));
    for &z in &nodes[2..] {
        track.push(NodeTrack::Free(initial.apply(z)));
    }
    stages.push(initial);

    // Keep an interior probe for the renormalizations and the terminal
    // orientation.
    let mut probe = stages[0].apply(Point::new(0.0, 0.0));

    let push_and_advance = |stage: ElementaryMap,
                            track: &mut Vec<NodeTrack>,
                            probe: &mut Point,
                            stages: &mut Vec<ElementaryMap>| {
        for t in track.iter_mut() {
            *t = t.advance(&stage);
        }
        *probe = stage.apply(*probe);
        stages.push(stage);
    };

    for k in 2..n {
        // Keep the active zone at unit scale: the slit parameter sets it.
        if let NodeTrack::Free(z) = track[k] {
            let scale = z.norm();
            if scale.is_finite() && scale > 0.0 && !(1e-2..=1e2).contains(&scale) {
                push_and_advance(
                    ElementaryMap::RealAffine { center: 0.0, scale },
                    &mut track,
                    &mut probe,
                    &mut stages,
                );
            }
        }
        let zeta = match track[k] {
            NodeTrack::Free(z) => z,
            _ => unreachable!("node {k} unzipped before its stage"),
        };
        if !zeta.is_finite() || zeta.im <= 0.0 {
            return Err(ConformalError::SlitParameterOutOfHalfPlane {
                node: k,
                value: zeta,
            });
        }
        let slit = ElementaryMap::GeodesicSlit { zeta };
        push_and_advance(slit, &mut track, &mut probe, &mut stages);
        // The slit parameter itself maps to the origin exactly.
        track[k] = NodeTrack::Rail(0.0);
    }

    // Rescale so the terminal junction acts at unit scale.
    let probe_scale = probe.norm();
    if probe_scale.is_finite() && probe_scale > 0.0 && !(1e-1..=1e1).contains(&probe_scale) {
        push_and_advance(
            ElementaryMap::RealAffine {
                center: 0.0,
                scale: probe_scale,
            },
            &mut track,
            &mut probe,
            &mut stages,
        );
    }

    // Junction of the two curve ends: image of node 0 on the real axis.
    let q = match track[0] {
        NodeTrack::Rail(x) => x,
        NodeTrack::Pole => f64::INFINITY,
        NodeTrack::Free(z) => {
            return Err(ConformalError::SlitParameterOutOfHalfPlane { node: 0, value: z })
        }
    };
    if q.abs() < 1e-12 {
        return Err(ConformalError::TerminalJunctionDegenerate { q_abs: q.abs() });
    }
    let u_probe = if q.is_finite() {
        probe / (1.0 - probe / q)
    } else {
        probe
    };
    let sign = if (u_probe * u_probe).im > 0.0 {
        1.0
    } else {
        -1.0
    };
    // With the interior on the left of the traversal, the interior-side rails
    // take the negative prong and the junction lands on the opposite ray.
    if q.is_finite() && sign * q > 0.0 {
        return Err(ConformalError::TerminalOrientationInconsistent);
    }
    let terminal = ElementaryMap::TerminalJoin { q, sign };
    push_and_advance(terminal, &mut track, &mut probe, &mut stages);

    // Recenter the origin image at i; the Cayley transform then sends it to
    // the middle of the disk.
    if !probe.is_finite() || probe.im <= 0.0 {
        return Err(ConformalError::TerminalOrientationInconsistent);
    }
    push_and_advance(
        ElementaryMap::RealAffine {
            center: probe.re,
            scale: probe.im,
        },
        &mut track,
        &mut probe,
        &mut stages,
    );
    stages.push(ElementaryMap::HalfPlaneToDisk);

    let node_images: Vec<Point> = track
        .into_iter()
        .map(NodeTrack::into_circle_point)
        .collect();

    Ok(ConformalMap {
        domain: domain.clone(),
        stages,
        node_images,
        normalized: false,
    })
}

impl ConformalMap {
    /// Map with explicit stages over a domain; used for oracle constructions.
    pub fn from_stages(
        domain: &JordanDomain,
        stages: Vec<ElementaryMap>,
        normalized: bool,
    ) -> Self {
        let node_images = domain
            .nodes()
            .iter()
            .map(|&z| stages.iter().fold(z, |acc, s| s.apply(acc)))
            .collect();
        ConformalMap {
            domain: domain.clone(),
            stages,
            node_images,
            normalized,
        }
    }

    pub fn domain(&self) -> &JordanDomain {
        &self.domain
    }

    pub fn stages(&self) -> &[ElementaryMap] {
        &self.stages
    }

    pub fn node_images(&self) -> &[Point] {
        &self.node_images
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    fn apply_stages(&self, z: Point) -> Point {
        self.stages.iter().fold(z, |acc, s| s.apply(acc))
    }

    /// Forward evaluation at a strictly interior point of the domain.
    pub fn eval(&self, z: Point) -> Result<Point, ConformalError> {
        if self.domain.classify(z) != Classification::Inside {
            return Err(ConformalError::PointOutsideDomain);
        }
        let w = self.apply_stages(z);
        if !w.re.is_finite() || !w.im.is_finite() {
            return Err(StageError::NonFinite {
                stage: self.stages.len(),
            }
            .into());
        }
        Ok(w)
    }

    /// Backward evaluation at a point strictly inside the unit disk.
    pub fn eval_inverse(&self, w: Point) -> Result<Point, ConformalError> {
        if w.norm() >= 1.0 {
            return Err(ConformalError::PointOutsideDisk);
        }
        let mut z = w;
        for (idx, stage) in self.stages.iter().enumerate().rev() {
            z = stage.apply_inverse(z, idx)?;
        }
        Ok(z)
    }

    /// Derivative at the origin by the trapezoid rule on `|z| = rho`,
    /// spectrally accurate for maps analytic on the closed disk of that
    /// radius.
    pub fn derivative_at_origin(
        &self,
        rho: f64,
        quad_nodes: usize,
    ) -> Result<Point, ConformalError> {
        if self.domain.distance_to_boundary(Point::new(0.0, 0.0)) <= rho {
            return Err(ConformalError::RadiusTooLarge { radius: rho });
        }
        let n = quad_nodes.max(16);
        let mut sum = Point::new(0.0, 0.0);
        for k in 0..n {
            let theta = std::f64::consts::TAU * k as f64 / n as f64;
            let z = Point::from_polar(rho, theta);
            sum += self.apply_stages(z) * Point::from_polar(1.0, -theta);
        }
        Ok(sum / (n as f64 * rho))
    }

    /// Append a disk automorphism killing the origin image and a rotation
    /// making the origin derivative real positive. Idempotent within
    /// tolerance.
    pub fn normalize_at_origin(&self) -> Result<ConformalMap, ConformalError> {
        let w0 = self.apply_stages(Point::new(0.0, 0.0));
        if w0.norm() >= 1.0 - 1e-6 {
            return Err(ConformalError::OriginImageOutsideDisk { w0_abs: w0.norm() });
        }
        let mut stages = self.stages.clone();
        stages.push(ElementaryMap::DiskAutomorphism { w0 });
        let centered = ConformalMap {
            domain: self.domain.clone(),
            stages,
            node_images: Vec::new(),
            normalized: false,
        };
        // Quadrature circle stays inside domains of any inradius.
        let rho =
            DEFAULT_DERIV_RADIUS.min(0.5 * self.domain.distance_to_boundary(Point::new(0.0, 0.0)));
        let d = centered.derivative_at_origin(rho, DEFAULT_DERIV_NODES)?;
        let theta = -d.arg();
        let mut stages = centered.stages;
        stages.push(ElementaryMap::Rotation { theta });
        let tail = &stages[stages.len() - 2..];
        let node_images = self
            .node_images
            .iter()
            .map(|&w| tail.iter().fold(w, |acc, s| s.apply(acc)))
            .collect();
        Ok(ConformalMap {
            domain: self.domain.clone(),
            stages,
            node_images,
            normalized: true,
        })
    }

    /// Recorded boundary image of a node, pushed through all stages.
    pub fn boundary_value(&self, node_index: usize) -> Result<Point, ConformalError> {
        self.node_images
            .get(node_index)
            .copied()
            .ok_or(ConformalError::IndexOutOfRange {
                index: node_index,
                len: self.node_images.len(),
            })
    }

    /// Line-oriented dump of the stage stack with full-precision parameters.
    pub fn dump_stages(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("stages {}\n", self.stages.len()));
        for s in &self.stages {
            match *s {
                ElementaryMap::InitialRoot { z0, z1 } => out.push_str(&format!(
                    "initial_root {} {} {} {}\n",
                    z0.re, z0.im, z1.re, z1.im
                )),
                ElementaryMap::GeodesicSlit { zeta } => {
                    out.push_str(&format!("geodesic_slit {} {}\n", zeta.re, zeta.im))
                }
                ElementaryMap::TerminalJoin { q, sign } => {
                    out.push_str(&format!("terminal_join {} {}\n", q, sign))
                }
                ElementaryMap::RealAffine { center, scale } => {
                    out.push_str(&format!("real_affine {} {}\n", center, scale))
                }
                ElementaryMap::HalfPlaneToDisk => out.push_str("halfplane_to_disk\n"),
                ElementaryMap::DiskAutomorphism { w0 } => {
                    out.push_str(&format!("disk_automorphism {} {}\n", w0.re, w0.im))
                }
                ElementaryMap::Rotation { theta } => out.push_str(&format!("rotation {}\n", theta)),
            }
        }
        out.push_str("end\n");
        out
    }
}

/// Parse a stage stack back from its dump text.
pub fn parse_stage_dump(text: &str) -> Result<Vec<ElementaryMap>, ConformalError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| ConformalError::DumpParse("empty dump".into()))?;
    let count: usize = header
        .strip_prefix("stages ")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| ConformalError::DumpParse(format!("bad header: {header}")))?;
    let mut stages = Vec::with_capacity(count);
    let parse_f64 = |tok: Option<&str>, line: &str| {
        tok.and_then(|t| t.parse::<f64>().ok())
            .ok_or_else(|| ConformalError::DumpParse(format!("bad number in line: {line}")))
    };
    for line in lines {
        if line == "end" {
            break;
        }
        let mut toks = line.split_whitespace();
        let kind = toks
            .next()
            .ok_or_else(|| ConformalError::DumpParse("blank stage line".into()))?;
        let stage = match kind {
            "initial_root" => ElementaryMap::InitialRoot {
                z0: Point::new(parse_f64(toks.next(), line)?, parse_f64(toks.next(), line)?),
                z1: Point::new(parse_f64(toks.next(), line)?, parse_f64(toks.next(), line)?),
            },
            "geodesic_slit" => ElementaryMap::GeodesicSlit {
                zeta: Point::new(parse_f64(toks.next(), line)?, parse_f64(toks.next(), line)?),
            },
            "terminal_join" => ElementaryMap::TerminalJoin {
                q: parse_f64(toks.next(), line)?,
                sign: parse_f64(toks.next(), line)?,
            },
            "real_affine" => ElementaryMap::RealAffine {
                center: parse_f64(toks.next(), line)?,
                scale: parse_f64(toks.next(), line)?,
            },
            "halfplane_to_disk" => ElementaryMap::HalfPlaneToDisk,
            "disk_automorphism" => ElementaryMap::DiskAutomorphism {
                w0: Point::new(parse_f64(toks.next(), line)?, parse_f64(toks.next(), line)?),
            },
            "rotation" => ElementaryMap::Rotation {
                theta: parse_f64(toks.next(), line)?,
            },
            other => return Err(ConformalError::DumpParse(format!("unknown stage: {other}"))),
        };
        stages.push(stage);
    }
    if stages.len() != count {
        return Err(ConformalError::DumpParse(format!(
            "expected {count} stages, parsed {}",
            stages.len()
        )));
    }
    Ok(stages)
}

/// Reference evaluator for the normalized Riemann map of the disk
/// `|z - c| < r`: the rescaling `(z - c)/r` composed with the disk
/// automorphism at `-c/r`. For real `c` its origin derivative
/// `r/(r^2 - c^2)` is already real positive.
pub fn eval_offcenter_oracle(c: Point, r: f64, z: Point) -> Point {
    let w = (z - c) / r;
    let w0 = -c / r;
    (w - w0) / (1.0 - w0.conj() * w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::make_unit_disk;

    #[test]
    fn insufficient_nodes_rejected() {
        let nodes: Vec<Point> = (0..8)
            .map(|k| Point::from_polar(1.0, std::f64::consts::TAU * k as f64 / 8.0))
            .collect();
        let d = JordanDomain::new(nodes, 1e-9).unwrap();
        assert!(matches!(
            build_geodesic_map(&d),
            Err(ConformalError::InsufficientNodes(8))
        ));
    }

    #[test]
    fn dump_round_trips() {
        let d = make_unit_disk(64).unwrap();
        let map = build_geodesic_map(&d)
            .unwrap()
            .normalize_at_origin()
            .unwrap();
        let dump = map.dump_stages();
        let parsed = parse_stage_dump(&dump).unwrap();
        assert_eq!(parsed, map.stages);
    }
}
