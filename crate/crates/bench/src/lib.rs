//! Shared fixtures for the criterion benches.

use dicke_core::ed::BasisSpec;
use dicke_core::{ModelParams, ParitySector};

/// ω = 1, ω_q = 0.005, N = 100.
pub fn running_example(g: f64) -> ModelParams {
    ModelParams::two_photon(1.0, 0.005, g, 100)
}

/// Even-photon sector of the running example at `cutoff`.
pub fn even_sector(cutoff: usize) -> BasisSpec {
    BasisSpec::new(100, cutoff, ParitySector::Even)
}
