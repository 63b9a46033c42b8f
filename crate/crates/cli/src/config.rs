//! JSON experiment configuration: one human-writable document drives the
//! family experiments and the maximum-principle verification. Unknown fields
//! are rejected so typos fail closed.

use convmap_core::convergence::ConvergenceConfig;
use convmap_core::domains::DomainFamily;
use convmap_core::geometry::{JordanDomain, Point, DEFAULT_GEOM_TOL};
use convmap_core::lindelof::{
    sector_notched_disk, zeros_on_arc, BoundaryTarget, TestFunction, TestFunctionKind,
};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// Overrides the family's node count when present.
    #[serde(default)]
    pub nodes: Option<usize>,
    #[serde(default)]
    pub family: Option<DomainFamily>,
    #[serde(default)]
    pub convergence: Option<ConvergenceConfig>,
    #[serde(default)]
    pub lindelof: Option<Vec<LindelofCase>>,
    pub outputs: Outputs,
    /// Real wall-clock columns break byte-identical reruns; timings are
    /// zeroed unless explicitly requested.
    #[serde(default)]
    pub emit_timings: bool,
    /// Grid used by the inscribed-disk certificate.
    #[serde(default = "default_kernel_grid")]
    pub kernel_grid: usize,
}

fn default_kernel_grid() -> usize {
    48
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub json: Option<PathBuf>,
    #[serde(default)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LindelofCase {
    pub domain: DomainDescriptor,
    pub z0: Point,
    pub r: f64,
    /// Rotation order; measured from the free arc when omitted.
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default = "default_shell_band")]
    pub shell_band: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    pub test_function: TestFunctionSpec,
    #[serde(default)]
    pub wos: Option<WosSpec>,
}

fn default_shell_band() -> f64 {
    convmap_core::lindelof::DEFAULT_SHELL_BAND
}

fn default_samples() -> usize {
    3000
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum DomainDescriptor {
    UnitDisk {
        nodes: usize,
    },
    /// Disk of radius `outer_r` with the wedge over `[notch_lo, notch_hi]`
    /// removed down to `inner_r`.
    NotchedDisk {
        outer_r: f64,
        notch_lo: f64,
        notch_hi: f64,
        inner_r: f64,
        nodes: usize,
    },
    Polyline {
        nodes: Vec<Point>,
    },
}

impl DomainDescriptor {
    pub fn build(&self) -> Result<JordanDomain, String> {
        match self {
            DomainDescriptor::UnitDisk { nodes } => {
                convmap_core::domains::make_unit_disk(*nodes).map_err(|e| e.to_string())
            }
            DomainDescriptor::NotchedDisk {
                outer_r,
                notch_lo,
                notch_hi,
                inner_r,
                nodes,
            } => sector_notched_disk(*outer_r, *notch_lo, *notch_hi, *inner_r, *nodes)
                .map_err(|e| e.to_string()),
            DomainDescriptor::Polyline { nodes } => {
                JordanDomain::new(nodes.clone(), DEFAULT_GEOM_TOL).map_err(|e| e.to_string())
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TestFunctionSpec {
    Explicit {
        zeros: Vec<Point>,
        scale: f64,
    },
    /// `count` zeros equally spaced on the unit-circle arc `[lo, hi]`, with
    /// scale defaulting to `3^-count`.
    ZerosOnArc {
        count: usize,
        lo: f64,
        hi: f64,
        #[serde(default)]
        scale: Option<f64>,
    },
}

impl TestFunctionSpec {
    pub fn build(&self) -> TestFunction {
        match self {
            TestFunctionSpec::Explicit { zeros, scale } => TestFunction {
                kind: TestFunctionKind::Polynomial,
                zeros: zeros.clone(),
                scale: *scale,
            },
            TestFunctionSpec::ZerosOnArc {
                count,
                lo,
                hi,
                scale,
            } => TestFunction {
                kind: TestFunctionKind::BlaschkeLike,
                zeros: zeros_on_arc(*lo, *hi, *count),
                scale: scale.unwrap_or_else(|| 3.0f64.powi(-(*count as i32))),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WosSpec {
    pub trials: u64,
    #[serde(default = "default_absorb_tol")]
    pub absorb_tol: f64,
    /// Defaults to the shell portion of the boundary inside the instance
    /// circle.
    #[serde(default)]
    pub target: Option<BoundaryTarget>,
}

fn default_absorb_tol() -> f64 {
    1e-4
}

pub fn load_config(path: &std::path::Path) -> Result<ExperimentConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("config parse error: {e}"))
}
