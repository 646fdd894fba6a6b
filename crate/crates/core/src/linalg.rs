//! Small dense helpers on top of nalgebra.

use nalgebra::DMatrix;

use crate::{CMatrix, Complex64};

pub(crate) fn max_abs_entry(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise deviation of `m` from its adjoint.
pub(crate) fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs_entry(&(m - m.adjoint()))
}

pub(crate) fn identity_defect(m: &CMatrix) -> f64 {
    max_abs_entry(&(m - CMatrix::identity(m.nrows(), m.ncols())))
}

/// Eigen-decomposition of a Hermitian matrix. Only the Hermitian part of `m`
/// is used.
pub(crate) fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let h = (m + m.adjoint()).scale(0.5);
    let eig = h.symmetric_eigen();
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// Reassembles `U diag(values) U^dagger`.
pub(crate) fn from_spectrum(values: &[f64], vectors: &CMatrix) -> CMatrix {
    let n = values.len();
    let mut scaled = vectors.clone();
    for (j, &v) in values.iter().enumerate() {
        scaled.column_mut(j).scale_mut(v);
    }
    let out = &scaled * vectors.adjoint();
    debug_assert_eq!(out.nrows(), n);
    out
}

/// Positive square root of a positive semidefinite Hermitian matrix.
///
/// Eigenvalues below `8 eps dim lambda_max` are taken as zero. A zero
/// eigenvalue comes back from the solver as noise of order `eps`, and its
/// square root (order `1e-8`) would otherwise dominate fidelity errors for
/// rank-deficient states.
pub(crate) fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let top = values.iter().copied().fold(0.0f64, f64::max);
    let cutoff = 8.0 * f64::EPSILON * values.len() as f64 * top;
    let roots: Vec<f64> = values
        .iter()
        .map(|&v| if v > cutoff { v.sqrt() } else { 0.0 })
        .collect();
    from_spectrum(&roots, &vectors)
}

/// Tr|A| as the sum of singular values.
pub(crate) fn trace_norm(m: &CMatrix) -> f64 {
    m.clone().singular_values().iter().sum()
}

pub(crate) fn real_trace(m: &CMatrix) -> f64 {
    m.diagonal().iter().map(|z| z.re).sum()
}

/// Swaps the two tensor factors of an operator on C^2 (x) C^2.
pub(crate) fn swap_qubits(m: &CMatrix) -> CMatrix {
    let swap = DMatrix::from_fn(4, 4, |i, j| {
        let swapped = ((i & 1) << 1) | (i >> 1);
        if swapped == j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    &swap * m * &swap
}

pub(crate) fn real_matrix(rows: usize, cols: usize, data: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)))
}
