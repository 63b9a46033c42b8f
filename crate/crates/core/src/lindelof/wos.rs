//! Walk-on-spheres estimation of harmonic measure on Jordan polyline domains.
//!
//! Each trial jumps to a uniform point on the largest disk around the current
//! point inside the domain and absorbs once the boundary is within the
//! absorption tolerance. Per-trial RNG streams are derived as
//! `seed xor trial_index`, so the estimate is independent of execution order
//! and thread count.

use crate::geometry::{Classification, JordanDomain, Point};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum WosError {
    #[error("start point is not strictly inside the domain")]
    StartNotInterior,
    #[error("need at least 1000 trials, got {0}")]
    TooFewTrials(u64),
    #[error("walk exceeded {0} steps; geometry too tight for the absorption tolerance")]
    NoProgress(u64),
}

/// Subset of the boundary scored by the estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum BoundaryTarget {
    /// Absorption points whose argument lies within the angular interval.
    Arc { center_angle: f64, half_width: f64 },
    /// Absorption points inside the closed disk around `center`.
    WithinDisk { center: Point, radius: f64 },
}

impl BoundaryTarget {
    pub fn contains(&self, p: Point) -> bool {
        match *self {
            BoundaryTarget::Arc {
                center_angle,
                half_width,
            } => crate::geometry::angle_distance(p.arg(), center_angle) <= half_width,
            BoundaryTarget::WithinDisk { center, radius } => (p - center).norm() <= radius,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WosParams {
    pub absorb_tol: f64,
    pub max_steps: u64,
}

impl Default for WosParams {
    fn default() -> Self {
        WosParams {
            absorb_tol: 1e-4,
            max_steps: 100_000,
        }
    }
}

/// Harmonic-measure estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WosEstimate {
    pub omega_hat: f64,
    pub stderr: f64,
    pub trials: u64,
    pub hits: u64,
    pub mean_steps: f64,
}

/// Estimate the harmonic measure of `target` seen from `z0`.
pub fn harmonic_measure_wos(
    domain: &JordanDomain,
    z0: Point,
    target: &BoundaryTarget,
    trials: u64,
    seed: u64,
    params: WosParams,
) -> Result<WosEstimate, WosError> {
    if trials < 1000 {
        return Err(WosError::TooFewTrials(trials));
    }
    if domain.classify(z0) != Classification::Inside {
        return Err(WosError::StartNotInterior);
    }

    let results: Result<Vec<(u64, u64)>, WosError> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ trial);
            let mut x = z0;
            let mut steps = 0u64;
            loop {
                let (dist, closest) = domain.closest_boundary_point(x);
                if dist <= params.absorb_tol {
                    let hit = u64::from(target.contains(closest));
                    return Ok((hit, steps));
                }
                let angle = rng.gen::<f64>() * TAU;
                x += Point::from_polar(dist, angle);
                steps += 1;
                if steps >= params.max_steps {
                    return Err(WosError::NoProgress(params.max_steps));
                }
            }
        })
        .collect();
    let results = results?;
    let hits: u64 = results.iter().map(|r| r.0).sum();
    let total_steps: u64 = results.iter().map(|r| r.1).sum();
    let p = hits as f64 / trials as f64;
    let stderr = (p * (1.0 - p) / trials as f64).sqrt();
    Ok(WosEstimate {
        omega_hat: p,
        stderr,
        trials,
        hits,
        mean_steps: total_steps as f64 / trials as f64,
    })
}
