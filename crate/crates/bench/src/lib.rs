//! Shared fixtures for the benchmarks.

use qi_fading::oracle::{thermal_state, Truncation};
use qi_fading::{DensityMatrix, SystemParams};

/// Small-brightness point where dim 4-6 truncations are accurate.
pub fn desk_params() -> SystemParams {
    SystemParams::new(1.0, 0.1, 0.3, 0.5, 0.01, 0.5).expect("valid parameters")
}

/// Thermal pair of means `n0`, `n1` truncated at `dim`.
pub fn thermal_pair(n0: f64, n1: f64, dim: usize) -> (DensityMatrix, DensityMatrix) {
    let t = Truncation::new(dim, 1.0);
    (
        thermal_state(n0, t).expect("thermal state"),
        thermal_state(n1, t).expect("thermal state"),
    )
}
