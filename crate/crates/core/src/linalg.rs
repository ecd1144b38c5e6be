//! Dense Hermitian eigendecompositions.
//!
//! nalgebra's `symmetric_eigen` can stop its QR iteration early and return
//! eigenpairs with residuals near 1e-3 on small, well-conditioned matrices,
//! so eigenproblems go through faer instead.

use faer::{Mat, Side};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Eigenpairs of a real symmetric matrix, eigenvalues ascending. Only the
/// lower triangle is read.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "symmetric_eigen needs a square matrix");
    if n == 0 {
        return (DVector::zeros(0), DMatrix::zeros(0, 0));
    }
    let a = Mat::<f64>::from_fn(n, n, |i, j| m[(i, j)]);
    let evd = a
        .self_adjoint_eigen(Side::Lower)
        .expect("self-adjoint eigendecomposition converges for finite input");
    let s = evd.S().column_vector();
    let u = evd.U();
    (DVector::from_fn(n, |i, _| s[i]), DMatrix::from_fn(n, n, |i, j| u[(i, j)]))
}

/// Eigenpairs of a complex Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> (DVector<f64>, DMatrix<Complex64>) {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "hermitian_eigen needs a square matrix");
    if n == 0 {
        return (DVector::zeros(0), DMatrix::zeros(0, 0));
    }
    let a = Mat::<Complex64>::from_fn(n, n, |i, j| m[(i, j)]);
    let evd = a
        .self_adjoint_eigen(Side::Lower)
        .expect("self-adjoint eigendecomposition converges for finite input");
    let s = evd.S().column_vector();
    let u = evd.U();
    (DVector::from_fn(n, |i, _| s[i].re), DMatrix::from_fn(n, n, |i, j| u[(i, j)]))
}
