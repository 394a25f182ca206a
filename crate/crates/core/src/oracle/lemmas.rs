//! Numerical checks of Helstrom concavity and of the fading-induced loss
//! of the multi-copy error exponent.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::channel::conditional_state;
use super::density::{DensityMatrix, Truncation};
use super::discrimination::{helstrom, qcb, DiscriminationReport};
use super::fading::{FadingQuadrature, QuadratureNode};
use super::linalg::CMatrix;
use crate::error::{invalid, Error, Result};
use crate::params::{FadingModel, FadingSample, Hypothesis, SystemParams};

/// Concavity slack below which a trial counts as a violation.
pub const LEMMA1_SLACK_TOL: f64 = 1e-9;
/// Truncation tolerance for the desk-scale lemma states.
pub const DESK_DEFICIT_TOL: f64 = 1e-2;
/// Copy-space cap: three dense complex matrices within 2 GiB.
pub const DEFAULT_MAX_COPY_DIM: usize = 6689;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma1Report {
    pub trials: usize,
    pub dim: usize,
    pub mixture_size: usize,
    pub violations: usize,
    pub min_slack: f64,
    pub mean_slack: f64,
}

/// `helstrom(sum f rho0, sum f rho1) - sum f helstrom(rho0, rho1)`.
pub fn concavity_slack(pairs: &[(DensityMatrix, DensityMatrix)], weights: &[f64], pi0: f64) -> Result<f64> {
    if pairs.is_empty() || pairs.len() != weights.len() {
        return Err(invalid("weights", "need one weight per state pair"));
    }
    let (first0, first1) = &pairs[0];
    let n = first0.total_dim();
    let mut mix0 = CMatrix::zeros(n, n);
    let mut mix1 = CMatrix::zeros(n, n);
    let mut separate = 0.0;
    for ((r0, r1), &f) in pairs.iter().zip(weights) {
        r0.same_shape(first0)?;
        r1.same_shape(first1)?;
        mix0 += r0.matrix() * Complex64::new(f, 0.0);
        mix1 += r1.matrix() * Complex64::new(f, 0.0);
        separate += f * helstrom(r0, r1, pi0)?;
    }
    let dims = first0.mode_dims().to_vec();
    let joint = helstrom(
        &DensityMatrix::from_parts(mix0, dims.clone()),
        &DensityMatrix::from_parts(mix1, dims),
        pi0,
    )?;
    Ok(joint - separate)
}

/// `G G^dag / tr` with `G` a complex Ginibre matrix.
pub fn random_density_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    });
    let rho = &g * g.adjoint();
    let t = rho.trace();
    DensityMatrix::from_parts(rho / t, vec![dim])
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Random mixtures of random state pairs with random priors; counts trials
/// where the Helstrom error of the mixture falls below the mixture of
/// Helstrom errors by more than [`LEMMA1_SLACK_TOL`].
pub fn lemma1_check(trials: usize, dim: usize, mixture_size: usize, seed: u64) -> Result<Lemma1Report> {
    if !(2..=8).contains(&dim) {
        return Err(invalid("dim", format!("must lie in 2..=8, got {dim}")));
    }
    if !(1..=8).contains(&mixture_size) {
        return Err(invalid(
            "mixture_size",
            format!("must lie in 1..=8, got {mixture_size}"),
        ));
    }
    if trials == 0 {
        return Err(invalid("trials", "must be positive"));
    }
    let slacks: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let pi0: f64 = rng.random();
            let raw: Vec<f64> = (0..mixture_size).map(|_| Exp1.sample(&mut rng)).collect();
            let total: f64 = raw.iter().sum();
            let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
            let pairs: Vec<_> = (0..mixture_size)
                .map(|_| {
                    (
                        random_density_matrix(dim, &mut rng),
                        random_density_matrix(dim, &mut rng),
                    )
                })
                .collect();
            concavity_slack(&pairs, &weights, pi0)
        })
        .collect::<Result<_>>()?;
    Ok(Lemma1Report {
        trials,
        dim,
        mixture_size,
        violations: slacks.iter().filter(|&&s| s < -LEMMA1_SLACK_TOL).count(),
        min_slack: slacks.iter().copied().fold(f64::INFINITY, f64::min),
        mean_slack: crate::numerics::pairwise_sum(&slacks) / trials as f64,
    })
}

/// Settings for [`lemma2_trend_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma2Config {
    /// Per-mode Fock cutoff.
    pub dim: usize,
    /// Quadrature nodes per dimension; the phase grid is raised to at
    /// least `M (dim - 1) + 1`.
    pub nodes: usize,
    pub deficit_tol: f64,
    pub max_copy_dim: usize,
}

impl Lemma2Config {
    pub fn new(dim: usize, nodes: usize) -> Self {
        Self {
            dim,
            nodes,
            deficit_tol: DESK_DEFICIT_TOL,
            max_copy_dim: DEFAULT_MAX_COPY_DIM,
        }
    }
}

/// Multi-copy Helstrom error and per-copy exponent estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrendPoint {
    pub copies: usize,
    pub helstrom: f64,
    /// `-ln(helstrom) / M`.
    pub exponent: f64,
    /// `-ln(helstrom / min(pi0, pi1)) / M`, zero for indistinguishable
    /// hypotheses.
    pub normalized_exponent: f64,
}

type Sparse = Vec<(usize, usize, Complex64)>;

fn sparse(m: &CMatrix) -> Sparse {
    let mut out = Vec::new();
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if z != Complex64::new(0.0, 0.0) {
                out.push((i, j, z));
            }
        }
    }
    out
}

fn sparse_kron_power(single: &Sparse, n: usize, copies: usize) -> Sparse {
    let mut acc: Sparse = vec![(0, 0, Complex64::new(1.0, 0.0))];
    for _ in 0..copies {
        let mut next = Vec::with_capacity(acc.len() * single.len());
        for &(i, j, a) in &acc {
            for &(k, l, b) in single {
                next.push((i * n + k, j * n + l, a * b));
            }
        }
        acc = next;
    }
    acc
}

fn add_sparse(target: &mut CMatrix, entries: &Sparse, weight: f64) {
    for &(i, j, z) in entries {
        target[(i, j)] += z * weight;
    }
}

fn single_copy(
    params: &SystemParams,
    h: Hypothesis,
    sample: FadingSample,
    cfg: &Lemma2Config,
) -> Result<DensityMatrix> {
    let trunc = Truncation::new(cfg.dim, cfg.deficit_tol);
    Ok(conditional_state(h, params.n_s(), params.n_b(), sample, trunc)?.renormalized())
}

/// [`lemma2_trend_with`] under truncated-Rayleigh fading with mean
/// `params.kappa_bar()`; `kappa_bar = 0` gives identical hypotheses.
pub fn lemma2_trend(params: &SystemParams, copies: &[usize], dim: usize, nodes: usize) -> Result<Vec<TrendPoint>> {
    let fading = if params.kappa_bar() == 0.0 {
        FadingModel::deterministic(0.0, 0.0)?
    } else {
        FadingModel::truncated_rayleigh(params.kappa_bar())?
    };
    lemma2_trend_with(params, &fading, copies, &Lemma2Config::new(dim, nodes))
}

/// Exact `M`-copy Helstrom error between `rho0^(x)M` and the fading
/// average of `rho1(x, y)^(x)M`, for each `M` in `copies`.
pub fn lemma2_trend_with(
    params: &SystemParams,
    fading: &FadingModel,
    copies: &[usize],
    cfg: &Lemma2Config,
) -> Result<Vec<TrendPoint>> {
    if copies.iter().any(|&m| m == 0 || m > 6) {
        return Err(invalid("copies", "each copy count must lie in 1..=6"));
    }
    let single_dim = cfg.dim * cfg.dim;
    let zero = FadingSample {
        amplitude: 0.0,
        phase: 0.0,
    };
    let rho0 = sparse(single_copy(params, Hypothesis::Absent, zero, cfg)?.matrix());
    let (pi0, pi1) = (params.pi0(), params.pi1());
    let mut out = Vec::with_capacity(copies.len());
    for &m in copies {
        let total = (single_dim as u128).pow(m as u32);
        if total > cfg.max_copy_dim as u128 {
            return Err(Error::ResourceLimit {
                dim: usize::try_from(total).unwrap_or(usize::MAX),
                cap: cfg.max_copy_dim,
            });
        }
        let total = total as usize;
        let nodes: Vec<QuadratureNode> = match *fading {
            FadingModel::Deterministic { kappa, phi } => vec![QuadratureNode {
                sample: FadingSample {
                    amplitude: kappa.sqrt(),
                    phase: phi,
                },
                weight: 1.0,
            }],
            _ => {
                let phase_nodes = cfg.nodes.max(m * (cfg.dim - 1) + 1);
                FadingQuadrature::new(fading, cfg.nodes, phase_nodes)?.nodes().to_vec()
            }
        };
        let mut r1 = CMatrix::zeros(total, total);
        for chunk in nodes.chunks(rayon::current_num_threads().max(1)) {
            let powers: Vec<Sparse> = chunk
                .par_iter()
                .map(|n| {
                    let s = single_copy(params, Hypothesis::Present, n.sample, cfg)?;
                    Ok(sparse_kron_power(&sparse(s.matrix()), single_dim, m))
                })
                .collect::<Result<_>>()?;
            for (p, n) in powers.iter().zip(chunk) {
                add_sparse(&mut r1, p, n.weight);
            }
        }
        let mut r0 = CMatrix::zeros(total, total);
        add_sparse(&mut r0, &sparse_kron_power(&rho0, single_dim, m), 1.0);
        let dims = vec![cfg.dim; 2 * m];
        let rho1 = DensityMatrix::from_parts(r1, dims.clone()).renormalized();
        let rho0 = DensityMatrix::from_parts(r0, dims);
        let p = helstrom(&rho0, &rho1, pi0)?;
        let mf = m as f64;
        out.push(TrendPoint {
            copies: m,
            helstrom: p,
            exponent: -p.ln() / mf,
            normalized_exponent: (-(p / pi0.min(pi1)).ln() / mf).max(0.0),
        });
    }
    Ok(out)
}

/// Single-copy discrimination of the conditional hypotheses at one
/// fading draw; both states renormalized.
pub fn conditional_qcb(
    params: &SystemParams,
    amplitude: f64,
    phase: f64,
    trunc: impl Into<Truncation>,
) -> Result<DiscriminationReport> {
    let trunc = trunc.into();
    let sample = FadingSample { amplitude, phase };
    let r0 = conditional_state(Hypothesis::Absent, params.n_s(), params.n_b(), sample, trunc)?.renormalized();
    let r1 = conditional_state(Hypothesis::Present, params.n_s(), params.n_b(), sample, trunc)?.renormalized();
    qcb(&r0, &r1)
}

/// Chernoff exponent of the conditional pair at zero return amplitude.
pub fn qcb_vanishes_at_origin(params: &SystemParams, dim: usize) -> Result<f64> {
    Ok(conditional_qcb(params, 0.0, 0.0, Truncation::new(dim, DESK_DEFICIT_TOL))?.qcb_exponent)
}
