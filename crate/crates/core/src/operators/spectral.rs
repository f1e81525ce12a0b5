//! Hermitian eigendecomposition and excitation-number blocks.

use nalgebra::SymmetricEigen;

use super::{CMatrix, QOperator};

/// Eigenvalues (ascending) and matching eigenvector columns of a Hermitian
/// matrix.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Restriction of `op` to basis states with exactly `n` total excitations,
/// with the composite indices of those states.
pub fn excitation_block(op: &QOperator, n: usize) -> (CMatrix, Vec<usize>) {
    let sig = op.signature();
    let idx: Vec<usize> = (0..sig.dim()).filter(|&i| sig.excitations(i) == n).collect();
    let m = CMatrix::from_fn(idx.len(), idx.len(), |r, c| op.matrix()[(idx[r], idx[c])]);
    (m, idx)
}
