//! Hermitian eigendecomposition with block-diagonal splitting.
//!
//! States built from number-conserving channels are block diagonal in the
//! Fock basis, so each connected block of nonzero entries is diagonalized
//! separately.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Eigenpairs of one diagonal block; `indices` maps block rows to rows of
/// the full matrix.
#[derive(Debug, Clone)]
pub struct EigenBlock {
    pub indices: Vec<usize>,
    pub values: DVector<f64>,
    pub vectors: CMatrix,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Connected components of the joint sparsity pattern of `mats`.
///
/// Entries below `1e-14` times the largest entry are treated as zero.
/// Components are returned in order of their smallest index, indices
/// ascending.
pub fn hermitian_blocks(mats: &[&CMatrix]) -> Vec<Vec<usize>> {
    let n = mats.first().map_or(0, |m| m.nrows());
    let scale = mats.iter().flat_map(|m| m.iter()).map(|z| z.norm()).fold(0.0, f64::max);
    let cut = 1e-14 * scale;
    let mut parent: Vec<usize> = (0..n).collect();
    for m in mats {
        for j in 0..n {
            for i in 0..j {
                if m[(i, j)].norm() > cut {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
    }
    let mut slot = vec![usize::MAX; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[r]].push(i);
    }
    blocks
}

/// Eigendecomposition of the Hermitian part of `m` restricted to `indices`.
pub fn eigh_block(m: &CMatrix, indices: &[usize]) -> EigenBlock {
    let k = indices.len();
    if k == 1 {
        return EigenBlock {
            indices: indices.to_vec(),
            values: DVector::from_element(1, m[(indices[0], indices[0])].re),
            vectors: CMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)),
        };
    }
    let sub = CMatrix::from_fn(k, k, |a, b| {
        (m[(indices[a], indices[b])] + m[(indices[b], indices[a])].conj()) * 0.5
    });
    let eig = SymmetricEigen::new(sub);
    EigenBlock {
        indices: indices.to_vec(),
        values: eig.eigenvalues,
        vectors: eig.eigenvectors,
    }
}

/// Blockwise eigendecomposition of a Hermitian matrix.
pub fn eigh(m: &CMatrix) -> Vec<EigenBlock> {
    hermitian_blocks(&[m]).iter().map(|idx| eigh_block(m, idx)).collect()
}

/// All eigenvalues, ascending.
pub fn eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = eigh(m).iter().flat_map(|b| b.values.iter().copied()).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(m: &CMatrix) -> f64 {
    let mut abs: Vec<f64> = eigh(m).iter().flat_map(|b| b.values.iter().map(|v| v.abs())).collect();
    abs.sort_by(f64::total_cmp);
    crate::numerics::pairwise_sum(&abs)
}

/// Largest `|m_ij - conj(m_ji)|`.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Kronecker product `a (x) b`, first factor most significant.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn blocks_follow_sparsity() {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = c(1.0, 0.0);
        m[(0, 2)] = c(0.5, 0.5);
        m[(2, 0)] = c(0.5, -0.5);
        m[(1, 1)] = c(2.0, 0.0);
        m[(3, 3)] = c(3.0, 0.0);
        assert_eq!(hermitian_blocks(&[&m]), vec![vec![0, 2], vec![1], vec![3]]);
    }

    #[test]
    fn complex_hermitian_eigenvalues() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let m = CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let ev = eigenvalues(&m);
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
        let b = &eigh(&m)[0];
        let rebuilt = &b.vectors * CMatrix::from_diagonal(&b.values.map(|v| c(v, 0.0))) * b.vectors.adjoint();
        assert!((rebuilt - m).norm() < 1e-13);
    }

    #[test]
    fn trace_norm_of_difference_of_projectors() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = c(1.0, 0.0);
        m[(1, 1)] = c(-1.0, 0.0);
        assert_eq!(trace_norm(&m), 2.0);
    }

    #[test]
    fn detects_asymmetry() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = c(1.0, 0.0);
        assert_eq!(hermitian_defect(&m), 1.0);
    }
}
