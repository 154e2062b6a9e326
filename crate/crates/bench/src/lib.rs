//! Fixtures shared by the benchmarks.

use std::f64::consts::PI;

use otto_core::ensemble::CycleTemplate;
use otto_core::otto::DEFAULT_TAU_ISO;
use otto_core::{CycleSpec, HamiltonianSpec};

/// Tilted drive at θ = π/5 with stroke time 0.5513 and `β_h = β_c/2`.
pub fn tilted_cycle() -> CycleSpec {
    let h = HamiltonianSpec::with_theta(PI / 5.0).expect("valid angle");
    CycleSpec::new(h, 1.0, 0.5513, DEFAULT_TAU_ISO, 1.0, 0.5).expect("valid cycle")
}

pub fn half_ratio_template() -> CycleTemplate {
    CycleTemplate::new(1.0, 0.5)
}
