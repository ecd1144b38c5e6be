//! Lanczos iteration with full reorthogonalization for the lowest eigenvalue
//! of a Hermitian operator given only through matrix-vector products.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;
use crate::statevector::inner_product;

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    pub max_iterations: usize,
    /// Convergence when the Ritz residual |β_k·y_k| drops below this.
    pub tolerance: f64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            max_iterations: 400,
            tolerance: 1e-10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LanczosResult {
    pub eigenvalue: f64,
    pub eigenvector: Vec<Complex64>,
    pub iterations: usize,
    pub residual: f64,
}

fn normalize(v: &mut [Complex64]) -> f64 {
    let n = inner_product(v, v).re.sqrt();
    v.iter_mut().for_each(|x| *x /= n);
    n
}

/// Lowest eigenpair of the operator `apply` on vectors of length `dim`.
pub fn lowest_eigenpair(
    dim: usize,
    apply: impl Fn(&[Complex64], &mut [Complex64]),
    start: &[Complex64],
    opts: &LanczosOptions,
) -> Result<LanczosResult> {
    if start.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: start.len(),
        });
    }
    let mut q0 = start.to_vec();
    if normalize(&mut q0) == 0.0 {
        return Err(Error::InvalidArgument("zero Lanczos start vector".into()));
    }
    let mut basis: Vec<Vec<Complex64>> = vec![q0];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![Complex64::default(); dim];
    let cap = opts.max_iterations.min(dim).max(1);

    for k in 0..cap {
        apply(&basis[k], &mut w);
        let alpha = inner_product(&basis[k], &w).re;
        alphas.push(alpha);
        // Two passes of classical Gram-Schmidt against the whole basis.
        for _ in 0..2 {
            for q in &basis {
                let c = inner_product(q, &w);
                w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        let beta = inner_product(&w, &w).re.sqrt();

        let m = alphas.len();
        let t = DMatrix::from_fn(m, m, |i, j| {
            if i == j {
                alphas[i]
            } else if i + 1 == j {
                betas[i]
            } else if j + 1 == i {
                betas[j]
            } else {
                0.0
            }
        });
        let (vals, vecs) = symmetric_eigen(&t);
        let residual = (beta * vecs[(m - 1, 0)]).abs();
        let exhausted = beta < 1e-12 || k + 1 == dim;
        if residual < opts.tolerance || exhausted {
            let mut x = vec![Complex64::default(); dim];
            for (j, q) in basis.iter().enumerate() {
                let c = vecs[(j, 0)];
                x.iter_mut().zip(q).for_each(|(a, b)| *a += c * b);
            }
            normalize(&mut x);
            return Ok(LanczosResult {
                eigenvalue: vals[0],
                eigenvector: x,
                iterations: k + 1,
                residual,
            });
        }
        betas.push(beta);
        let next: Vec<Complex64> = w.iter().map(|x| x / beta).collect();
        basis.push(next);
    }
    Err(Error::LanczosNotConverged(cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigen;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_hermitian_matches_dense() {
        let n = 60;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut a = DMatrix::<Complex64>::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = if i == j {
                    Complex64::new(rng.gen_range(-2.0..2.0), 0.0)
                } else {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                };
                a[(i, j)] = v;
                a[(j, i)] = v.conj();
            }
        }
        let dense = hermitian_eigen(&a).0[0];
        let apply = |x: &[Complex64], y: &mut [Complex64]| {
            let r = &a * nalgebra::DVector::from_column_slice(x);
            y.copy_from_slice(r.as_slice());
        };
        let start: Vec<Complex64> = (0..n).map(|k| Complex64::new(1.0 + (k as f64).sin(), 0.0)).collect();
        let r = lowest_eigenpair(n, apply, &start, &LanczosOptions::default()).unwrap();
        assert!((r.eigenvalue - dense).abs() < 1e-10);
    }

    #[test]
    fn iteration_cap_is_reported() {
        let n = 50;
        let apply = |x: &[Complex64], y: &mut [Complex64]| {
            for (k, (a, b)) in x.iter().zip(y.iter_mut()).enumerate() {
                *b = a * (k as f64).powi(2);
            }
        };
        let start = vec![Complex64::new(1.0, 0.0); n];
        let opts = LanczosOptions {
            max_iterations: 3,
            tolerance: 1e-14,
        };
        assert!(matches!(
            lowest_eigenpair(n, apply, &start, &opts),
            Err(Error::LanczosNotConverged(3))
        ));
    }
}
