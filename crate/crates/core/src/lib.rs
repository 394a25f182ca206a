//! Detection performance of quantum illumination (OPA and SFG receivers)
//! and classical heterodyne illumination against Rayleigh-fading targets.
//!
//! - [`params`]: experiment parameters, fading models, config files.
//! - [`analytic`]: closed-form ROCs, Bayes error probabilities and SNRs.
//! - [`oracle`]: truncated-Fock-space states, Helstrom limits and quantum
//!   Chernoff exponents computed by brute force.
//! - [`montecarlo`]: seeded simulation of receiver outputs with Wilson
//!   confidence intervals.

pub mod analytic;
pub mod error;
pub mod montecarlo;
pub mod numerics;
pub mod oracle;
pub mod params;

pub use analytic::{BayesResult, OpaConfig, RocCurve, RocPoint, Threshold};
pub use error::{Error, Result};
pub use montecarlo::{McConfig, McEstimate, Receiver};
pub use oracle::{CovarianceMatrix, DensityMatrix, DiscriminationReport};
pub use params::{derived_x, Experiment, FadingModel, FadingSample, Hypothesis, Preset, SystemParams};
