//! Closed-form elementary conformal transforms and their inverses.
//!
//! The forward composition runs domain -> half-plane pictures -> unit disk.
//! Square roots use the branch with nonnegative imaginary part; values that
//! land exactly on the real axis (boundary bookkeeping) are resolved by the
//! explicit rail rules in the builder, never by these interior formulas.
//!
//! Narrow attachments make the implicit normalization of the raw composition
//! drift by huge scale factors, so every formula here is written in an
//! overflow-safe factored form and the builder interleaves real affine
//! renormalizations that keep the active part of the picture at unit scale.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Point = Complex64;

const I: Point = Point::new(0.0, 1.0);

/// Relative threshold below which a slit parameter counts as vertical.
const VERTICAL_EPS: f64 = 1e-13;

#[derive(Debug, Error, PartialEq)]
pub enum StageError {
    #[error("inverse left the required half-plane at stage {stage}")]
    BranchInversionFailure { stage: usize },
    #[error("non-finite value produced at stage {stage}")]
    NonFinite { stage: usize },
}

/// One closed-form conformal transform of the composition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ElementaryMap {
    /// `z -> sqrt((z - z1)/(z - z0))`, opening the edge `[z0, z1]` onto the
    /// real axis with `z1 -> 0` and `z0 -> infinity`; the branch maps the
    /// complement of the edge onto the upper half-plane.
    InitialRoot { z0: Point, z1: Point },
    /// Removes the hyperbolic geodesic from 0 to `zeta` in the upper
    /// half-plane: `w -> sqrt(a(w)^2 + h^2)` with `a(w) = w/(1 - w/p)`,
    /// `p = |zeta|^2 / Re zeta` (identity Moebius and `p = inf` when
    /// `Re zeta = 0`) and `h = |zeta|^2 / Im zeta`.
    GeodesicSlit { zeta: Point },
    /// Joins the two unzipped curve ends at 0 and `q`: the square of the
    /// Moebius `w/(1 - w/q)`, signed so the image is the upper half-plane.
    TerminalJoin { q: f64, sign: f64 },
    /// `w -> (w - center)/scale` with `scale > 0`: a hyperbolic isometry of
    /// the half-plane used to renormalize drifting picture scales.
    RealAffine { center: f64, scale: f64 },
    /// Cayley transform `w -> (w - i)/(w + i)`.
    HalfPlaneToDisk,
    /// `w -> (w - w0)/(1 - conj(w0) w)` with `|w0| < 1`.
    DiskAutomorphism { w0: Point },
    /// `w -> e^{i theta} w`.
    Rotation { theta: f64 },
}

/// Square root with nonnegative imaginary part (branch cut on `[0, inf)`).
#[inline]
pub fn sqrt_upper(v: Point) -> Point {
    let s = v.sqrt();
    if s.im < 0.0 {
        -s
    } else {
        s
    }
}

/// Overflow-safe complex division.
#[inline]
fn cdiv(a: Point, b: Point) -> Point {
    let m = b.re.abs().max(b.im.abs());
    if m == 0.0 {
        return Point::new(f64::INFINITY, f64::INFINITY);
    }
    if (1e-150..=1e150).contains(&m) {
        return a / b;
    }
    (a / m) / (b / m)
}

/// Upper-half-plane root of `a^2 + h^2`, factored so neither the square nor
/// the sum can overflow or flush to zero for representable inputs.
#[inline]
fn sqrt_sum_sq_upper(a: Point, h: f64) -> Point {
    let m = a.norm().max(h);
    if m == 0.0 {
        return Point::new(0.0, 0.0);
    }
    let an = a / m;
    let hn = h / m;
    sqrt_upper(an * an + hn * hn) * m
}

/// Upper-half-plane root of `v^2 - h^2` in the same factored form.
#[inline]
fn sqrt_diff_sq_upper(v: Point, h: f64) -> Point {
    let m = v.norm().max(h);
    if m == 0.0 {
        return Point::new(0.0, 0.0);
    }
    let vn = v / m;
    let hn = h / m;
    sqrt_upper(vn * vn - hn * hn) * m
}

/// Slit parameters `(p, h)` for a geodesic slit at `zeta`; `p` is
/// `f64::INFINITY` for a vertical geodesic.
#[inline]
pub fn slit_params(zeta: Point) -> (f64, f64) {
    let n = zeta.norm();
    let p = if zeta.re.abs() <= VERTICAL_EPS * n {
        f64::INFINITY
    } else {
        (n / zeta.re) * n
    };
    let h = (n / zeta.im) * n;
    (p, h)
}

/// Moebius `w / (1 - w/p)` with a safe pole wrap.
#[inline]
fn slit_moebius(w: Point, p: f64) -> Point {
    if !p.is_finite() {
        return w;
    }
    if !w.re.is_finite() || !w.im.is_finite() {
        return Point::new(-p, 0.0);
    }
    let t = w / p;
    if !t.re.is_finite() || !t.im.is_finite() {
        // Far beyond the pole the Moebius collapses to its limit at infinity.
        return Point::new(-p, 0.0);
    }
    cdiv(w, Point::new(1.0, 0.0) - t)
}

impl ElementaryMap {
    /// Forward evaluation at a strictly interior point.
    pub fn apply(&self, z: Point) -> Point {
        match *self {
            ElementaryMap::InitialRoot { z0, z1 } => I * cdiv(z - z1, z - z0).sqrt(),
            ElementaryMap::GeodesicSlit { zeta } => {
                let (p, h) = slit_params(zeta);
                sqrt_sum_sq_upper(slit_moebius(z, p), h)
            }
            ElementaryMap::TerminalJoin { q, sign } => {
                let u = slit_moebius(z, q);
                u * u * sign
            }
            ElementaryMap::RealAffine { center, scale } => (z - center) / scale,
            // (w - i)/(w + i), written so far-field values degrade gracefully.
            ElementaryMap::HalfPlaneToDisk => {
                Point::new(1.0, 0.0) - cdiv(Point::new(0.0, 2.0), z + I)
            }
            ElementaryMap::DiskAutomorphism { w0 } => cdiv(z - w0, 1.0 - w0.conj() * z),
            ElementaryMap::Rotation { theta } => Point::from_polar(1.0, theta) * z,
        }
    }

    /// Closed-form inverse at a strictly interior point of the image.
    pub fn apply_inverse(&self, w: Point, stage: usize) -> Result<Point, StageError> {
        let z = match *self {
            ElementaryMap::InitialRoot { z0, z1 } => {
                // w = i sqrt(m) => m = -w^2 and z = (z1 - m z0)/(1 - m).
                let m = -(w * w);
                cdiv(z1 - m * z0, Point::new(1.0, 0.0) - m)
            }
            ElementaryMap::GeodesicSlit { zeta } => {
                let (p, h) = slit_params(zeta);
                let a = sqrt_diff_sq_upper(w, h);
                let z = if p.is_finite() {
                    cdiv(a, Point::new(1.0, 0.0) + a / p)
                } else {
                    a
                };
                if z.im < -1e-9 {
                    return Err(StageError::BranchInversionFailure { stage });
                }
                z
            }
            ElementaryMap::TerminalJoin { q, sign } => {
                // w = sign * u^2 with u in the quadrant matching sign.
                let u0 = (w * sign).sqrt();
                let u = if sign < 0.0 { -u0 } else { u0 };
                let z = if q.is_finite() {
                    cdiv(u, Point::new(1.0, 0.0) + u / q)
                } else {
                    u
                };
                if z.im < -1e-9 {
                    return Err(StageError::BranchInversionFailure { stage });
                }
                z
            }
            ElementaryMap::RealAffine { center, scale } => w * scale + center,
            ElementaryMap::HalfPlaneToDisk => cdiv(I * (1.0 + w), Point::new(1.0, 0.0) - w),
            ElementaryMap::DiskAutomorphism { w0 } => cdiv(w + w0, 1.0 + w0.conj() * w),
            ElementaryMap::Rotation { theta } => Point::from_polar(1.0, -theta) * w,
        };
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(StageError::NonFinite { stage });
        }
        Ok(z)
    }
}

/// Track of one boundary node through the composition: strictly interior to
/// the current slit complement, pinned to the real axis after its unzip, or
/// at the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NodeTrack {
    Free(Point),
    Rail(f64),
    Pole,
}

impl NodeTrack {
    /// Push the track through a half-plane stage.
    pub fn advance(&self, stage: &ElementaryMap) -> NodeTrack {
        match *stage {
            ElementaryMap::InitialRoot { .. } => {
                unreachable!("initial stage is applied by the builder directly")
            }
            ElementaryMap::GeodesicSlit { zeta } => {
                let (p, h) = slit_params(zeta);
                match *self {
                    NodeTrack::Free(z) => NodeTrack::Free(sqrt_sum_sq_upper(slit_moebius(z, p), h)),
                    NodeTrack::Rail(x) => {
                        if x == 0.0 {
                            // The curve departs the base vertically; with the
                            // interior on the left of the traversal the
                            // interior-side prong is the negative one.
                            NodeTrack::Rail(-h)
                        } else {
                            let a = rail_moebius(x, p);
                            if !a.is_finite() {
                                return NodeTrack::Rail(a.signum() * f64::INFINITY);
                            }
                            NodeTrack::Rail(a.signum() * a.hypot(h))
                        }
                    }
                    NodeTrack::Pole => {
                        if p.is_finite() {
                            // a(inf) = -p, then the sign-preserving root.
                            let a = -p;
                            NodeTrack::Rail(a.signum() * a.hypot(h))
                        } else {
                            NodeTrack::Pole
                        }
                    }
                }
            }
            ElementaryMap::TerminalJoin { q, sign } => match *self {
                NodeTrack::Free(z) => {
                    let u = slit_moebius(z, q);
                    NodeTrack::Free(u * u * sign)
                }
                NodeTrack::Rail(x) => {
                    if !x.is_finite() {
                        let u = -q;
                        return NodeTrack::Rail(sign * u * u);
                    }
                    if q.is_finite() && (x - q).abs() <= 1e-12 * q.abs() {
                        return NodeTrack::Pole;
                    }
                    let u = rail_moebius(x, q);
                    if !u.is_finite() {
                        return NodeTrack::Pole;
                    }
                    NodeTrack::Rail(sign * u * u)
                }
                NodeTrack::Pole => {
                    if q.is_finite() {
                        let u = -q;
                        NodeTrack::Rail(sign * u * u)
                    } else {
                        NodeTrack::Pole
                    }
                }
            },
            ElementaryMap::RealAffine { center, scale } => match *self {
                NodeTrack::Free(z) => NodeTrack::Free((z - center) / scale),
                NodeTrack::Rail(x) => NodeTrack::Rail((x - center) / scale),
                NodeTrack::Pole => NodeTrack::Pole,
            },
            _ => unreachable!("disk-plane stages do not act on node tracks"),
        }
    }

    /// Final conversion through the Cayley transform onto the unit circle.
    pub fn into_circle_point(self) -> Point {
        match self {
            NodeTrack::Free(z) => ElementaryMap::HalfPlaneToDisk.apply(z),
            NodeTrack::Rail(x) => {
                if x.is_finite() {
                    // (x - i)/(x + i), kept unimodular for any real x.
                    if x.abs() <= 1.0 {
                        let d = x * x + 1.0;
                        Point::new((x * x - 1.0) / d, -2.0 * x / d)
                    } else {
                        let inv = 1.0 / x;
                        let d = 1.0 + inv * inv;
                        Point::new((1.0 - inv * inv) / d, -2.0 * inv / d)
                    }
                } else {
                    Point::new(1.0, 0.0)
                }
            }
            NodeTrack::Pole => Point::new(1.0, 0.0),
        }
    }
}

/// Real Moebius `x / (1 - x/p)` with the projective wrap at the pole.
#[inline]
fn rail_moebius(x: f64, p: f64) -> f64 {
    if !p.is_finite() {
        return x;
    }
    if !x.is_finite() {
        return -p;
    }
    let denom = 1.0 - x / p;
    if denom == 0.0 {
        return f64::INFINITY;
    }
    x / denom
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn admissible_point(stage: &ElementaryMap, rng: &mut ChaCha8Rng) -> Point {
        loop {
            let z = Point::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let ok = match *stage {
                ElementaryMap::InitialRoot { z0, z1 } => {
                    (z - z0).norm() > 0.1 && (z - z1).norm() > 0.1 && {
                        // Stay off the edge and its line extension margin.
                        crate::geometry::point_segment_distance(z, z0, z1) > 0.1
                    }
                }
                ElementaryMap::GeodesicSlit { zeta } => {
                    let (p, h) = slit_params(zeta);
                    let a = slit_moebius(z, p);
                    z.im > 0.05 && (a * a + h * h).norm() > 1e-3
                }
                ElementaryMap::TerminalJoin { q, .. } => {
                    // Stay inside the half-disk over [0, q], off its rim.
                    let c = Point::new(q / 2.0, 0.0);
                    z.im > 0.02 && (z - c).norm() < q.abs() / 2.0 - 0.05
                }
                ElementaryMap::RealAffine { .. } => z.im > 0.01,
                ElementaryMap::HalfPlaneToDisk => z.im > 0.05,
                ElementaryMap::DiskAutomorphism { .. } | ElementaryMap::Rotation { .. } => {
                    z.norm() < 0.95
                }
            };
            if ok {
                return z;
            }
        }
    }

    #[test]
    fn stage_round_trips_to_1e12() {
        let stages = vec![
            ElementaryMap::InitialRoot {
                z0: Point::new(1.0, 0.0),
                z1: Point::new(0.8, 0.6),
            },
            ElementaryMap::GeodesicSlit {
                zeta: Point::new(0.4, 0.9),
            },
            ElementaryMap::GeodesicSlit {
                zeta: Point::new(-0.3, 1.4),
            },
            ElementaryMap::GeodesicSlit {
                zeta: Point::new(0.0, 0.7),
            },
            ElementaryMap::TerminalJoin {
                q: -2.3,
                sign: -1.0,
            },
            ElementaryMap::TerminalJoin { q: 1.7, sign: 1.0 },
            ElementaryMap::RealAffine {
                center: -0.8,
                scale: 2.5,
            },
            ElementaryMap::HalfPlaneToDisk,
            ElementaryMap::DiskAutomorphism {
                w0: Point::new(0.3, -0.2),
            },
            ElementaryMap::Rotation { theta: 0.7 },
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for stage in &stages {
            for _ in 0..1000 {
                let z = admissible_point(stage, &mut rng);
                let w = stage.apply(z);
                let back = stage.apply_inverse(w, 0).unwrap();
                assert!(
                    (back - z).norm() <= 1e-12 * (1.0 + z.norm()),
                    "round trip failed for {stage:?} at {z}: got {back}"
                );
            }
        }
    }

    #[test]
    fn initial_root_maps_complement_to_upper_half_plane() {
        let stage = ElementaryMap::InitialRoot {
            z0: Point::new(1.0, 0.0),
            z1: Point::new(0.8, 0.6),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let z = admissible_point(&stage, &mut rng);
            let w = stage.apply(z);
            assert!(w.im >= -1e-14, "image {w} of {z} left the half-plane");
        }
    }

    #[test]
    fn geodesic_slit_sends_parameter_to_zero_and_fixes_half_plane() {
        let zeta = Point::new(0.5, 1.2);
        let stage = ElementaryMap::GeodesicSlit { zeta };
        // The square root halves the precision of the tip cancellation.
        assert!(stage.apply(zeta).norm() < 1e-7);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let z = admissible_point(&stage, &mut rng);
            let w = stage.apply(z);
            assert!(w.im > -1e-12, "slit image {w} of {z} left the half-plane");
        }
    }

    #[test]
    fn vertical_slit_skips_moebius_stage() {
        let zeta = Point::new(0.0, 0.9);
        let (p, h) = slit_params(zeta);
        assert!(p.is_infinite());
        assert!((h - 0.9).abs() < 1e-14);
        let stage = ElementaryMap::GeodesicSlit { zeta };
        assert!(stage.apply(zeta).norm() < 1e-7);
    }

    #[test]
    fn cayley_maps_half_plane_onto_disk() {
        let stage = ElementaryMap::HalfPlaneToDisk;
        assert!((stage.apply(I)).norm() < 1e-15);
        let w = stage.apply(Point::new(3.0, 0.5));
        assert!(w.norm() < 1.0);
        // Far-field values collapse toward 1 instead of overflowing.
        let far = stage.apply(Point::new(1e200, 1e180));
        assert!(far.is_finite());
        assert!((far - Point::new(1.0, 0.0)).norm() < 1e-100);
    }

    #[test]
    fn scale_safe_forms_survive_extreme_magnitudes() {
        let slit = ElementaryMap::GeodesicSlit {
            zeta: Point::new(3e-200, 1e-200),
        };
        let w = slit.apply(Point::new(5e-201, 2e-201));
        assert!(w.is_finite(), "tiny-scale slit produced {w}");
        let big = slit.apply(Point::new(1e250, 1e250));
        assert!(big.is_finite(), "huge input through tiny slit gave {big}");
    }
}
