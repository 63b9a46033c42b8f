//! Numerical laboratory for Riemann maps on varying Jordan domains.
//!
//! The crate builds conformal maps from Jordan polyline domains onto the unit
//! disk by composing closed-form slit maps, generates families of domains that
//! shrink onto the disk, measures interior/boundary/inverse convergence of the
//! normalized maps, and verifies a rotation-trick maximum principle with an
//! independent walk-on-spheres harmonic-measure estimator.

pub mod conformal;
pub mod convergence;
pub mod domains;
pub mod geometry;
pub mod lindelof;

pub use conformal::{ConformalMap, ElementaryMap};
pub use convergence::{ConvergenceConfig, ConvergenceReport, RowOutcome};
pub use domains::{DomainFamily, FamilyKind, HypothesisReport, KernelCertificate};
pub use geometry::{ArcSpec, Classification, JordanDomain, Point};
pub use lindelof::{
    BoundaryTarget, LemmaReport, LindelofInstance, TestFunction, TestFunctionKind, WosEstimate,
};
