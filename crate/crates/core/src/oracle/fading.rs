//! Quadrature over the fading distribution.

use std::f64::consts::TAU;

use rayon::prelude::*;

use super::density::{DensityMatrix, DEFAULT_DEFICIT_TOL};
use super::linalg::CMatrix;
use crate::error::{invalid, Error, Result};
use crate::numerics::{gauss_legendre, pairwise_sum};
use crate::params::{FadingModel, FadingSample};

/// Minimum node count per dimension.
pub const MIN_NODES: usize = 8;
/// Plain Rayleigh amplitudes are integrated up to `sqrt(40 kappa_bar)`;
/// the neglected mass is `exp(-40)`.
const RAYLEIGH_CUTOFF: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureNode {
    pub sample: FadingSample,
    pub weight: f64,
}

/// Gauss-Legendre in amplitude (density folded into the weights),
/// trapezoid in phase. Weights sum to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct FadingQuadrature {
    nodes: Vec<QuadratureNode>,
    amplitude_nodes: usize,
    phase_nodes: usize,
}

impl FadingQuadrature {
    pub fn new(model: &FadingModel, amplitude_nodes: usize, phase_nodes: usize) -> Result<Self> {
        if !model.is_random() {
            return Err(Error::DeterministicFading);
        }
        if amplitude_nodes < MIN_NODES || phase_nodes < MIN_NODES {
            return Err(invalid(
                "quadrature_nodes",
                format!("need at least {MIN_NODES} per dimension, got {amplitude_nodes} x {phase_nodes}"),
            ));
        }
        let upper = match *model {
            FadingModel::Rayleigh { kappa_bar } => (RAYLEIGH_CUTOFF * kappa_bar).sqrt(),
            _ => model.amplitude_support(),
        };
        let (xs, ws) = gauss_legendre(amplitude_nodes, 0.0, upper);
        let amp_w: Vec<f64> = xs
            .iter()
            .zip(&ws)
            .map(|(&x, &w)| Ok(w * model.pdf(x)?))
            .collect::<Result<_>>()?;
        let norm = pairwise_sum(&amp_w);
        let mut nodes = Vec::with_capacity(amplitude_nodes * phase_nodes);
        for (&x, &w) in xs.iter().zip(&amp_w) {
            for j in 0..phase_nodes {
                nodes.push(QuadratureNode {
                    sample: FadingSample {
                        amplitude: x,
                        phase: TAU * j as f64 / phase_nodes as f64,
                    },
                    weight: w / norm / phase_nodes as f64,
                });
            }
        }
        Ok(Self {
            nodes,
            amplitude_nodes,
            phase_nodes,
        })
    }

    pub fn nodes(&self) -> &[QuadratureNode] {
        &self.nodes
    }

    pub fn amplitude_nodes(&self) -> usize {
        self.amplitude_nodes
    }

    pub fn phase_nodes(&self) -> usize {
        self.phase_nodes
    }
}

fn pairwise_matrix_sum(mats: &mut [Option<CMatrix>]) -> CMatrix {
    if mats.len() == 1 {
        return mats[0].take().expect("each slot is summed once");
    }
    let (l, r) = mats.split_at_mut(mats.len() / 2);
    let (a, b) = rayon::join(|| pairwise_matrix_sum(l), || pairwise_matrix_sum(r));
    a + b
}

/// Weighted average of `builder` over a `nodes x nodes` quadrature of
/// `model`, renormalized to unit trace once the averaged truncation
/// deficit is found to be within [`DEFAULT_DEFICIT_TOL`].
///
/// Node states are built concurrently; the reduction tree depends only on
/// the node count, so the result does not depend on scheduling.
pub fn fading_average<F>(builder: F, model: &FadingModel, nodes: usize) -> Result<DensityMatrix>
where
    F: Fn(FadingSample) -> Result<DensityMatrix> + Sync,
{
    let quad = FadingQuadrature::new(model, nodes, nodes)?;
    average_over(builder, &quad, DEFAULT_DEFICIT_TOL)
}

/// [`fading_average`] on an explicit quadrature and deficit tolerance.
pub fn average_over<F>(builder: F, quad: &FadingQuadrature, deficit_tol: f64) -> Result<DensityMatrix>
where
    F: Fn(FadingSample) -> Result<DensityMatrix> + Sync,
{
    let states: Vec<DensityMatrix> = quad
        .nodes()
        .par_iter()
        .map(|n| builder(n.sample))
        .collect::<Result<_>>()?;
    let dims = states[0].mode_dims().to_vec();
    if let Some(bad) = states.iter().find(|s| s.mode_dims() != dims.as_slice()) {
        return Err(Error::DimensionMismatch(states[0].total_dim(), bad.total_dim()));
    }
    let deficit = pairwise_sum(
        &states
            .iter()
            .zip(quad.nodes())
            .map(|(s, n)| n.weight * s.trace_deficit())
            .collect::<Vec<_>>(),
    );
    if deficit > deficit_tol {
        return Err(Error::TruncationTooSmall {
            dim: dims[0],
            deficit,
            tol: deficit_tol,
            suggested: dims[0] + (dims[0] / 2).max(2),
        });
    }
    let mut weighted: Vec<Option<CMatrix>> = states
        .into_par_iter()
        .zip(quad.nodes().par_iter())
        .map(|(s, n)| Some(s.into_matrix() * num_complex::Complex64::new(n.weight, 0.0)))
        .collect();
    let sum = pairwise_matrix_sum(&mut weighted);
    Ok(DensityMatrix::from_parts(sum, dims)
        .renormalized()
        .with_deficit(deficit))
}
