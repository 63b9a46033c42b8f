//! Shared generators for the benchmark targets.

use convmap_core::domains::{DomainFamily, FamilyKind};
use convmap_core::geometry::{ArcSpec, JordanDomain};
use std::f64::consts::PI;

fn family(kind: FamilyKind, nodes: usize) -> DomainFamily {
    DomainFamily {
        kind,
        attach_angle: PI,
        length: 0.5,
        width0: 0.2,
        decay: 0.5,
        bump_sigma: 0.15,
        j_range: (0, 16),
        nodes,
        arcspec: ArcSpec::new(0.0, 1.2, 0.3, 0.2).unwrap(),
        r_bound: 2.0,
    }
}

/// Tube domain with the given node budget and angular half-width.
pub fn tube_domain(nodes: usize, width: f64) -> JordanDomain {
    let fam = family(FamilyKind::Tube, nodes);
    let j = (width / fam.width0).log(fam.decay).round() as i32;
    fam.generate(j.clamp(0, 16)).unwrap()
}

/// Bump domain with the given node budget and height.
pub fn bump_domain(nodes: usize, height: f64) -> JordanDomain {
    let fam = family(FamilyKind::Bump, nodes);
    let j = (height / fam.width0).log(fam.decay).round() as i32;
    fam.generate(j.clamp(0, 16)).unwrap()
}
