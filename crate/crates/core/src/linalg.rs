//! Dense symmetric factorization utilities.
//!
//! Matrices are stored in packed lower-triangular row-major order:
//! row `i` lives at offset `i*(i+1)/2` with length `i+1`. Covariance
//! matrices of fractional processes on fine grids are severely
//! ill-conditioned, so the Cholesky wrapper applies an escalating
//! diagonal jitter before giving up.

use crate::error::{CoreError, Result};

/// Index of entry `(i, j)`, `j <= i`, in packed lower-triangular storage.
#[inline]
pub fn packed_index(i: usize, j: usize) -> usize {
    debug_assert!(j <= i);
    i * (i + 1) / 2 + j
}

/// Number of stored entries for an `n x n` packed triangle.
#[inline]
pub fn packed_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Outcome of a jittered Cholesky factorization.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    pub n: usize,
    /// Lower-triangular factor in packed storage: `A + jitter*I = L L^T`.
    pub l: Vec<f64>,
    /// Diagonal shift that was required (0 when the matrix factored cleanly).
    pub jitter: f64,
}

fn try_cholesky(a: &[f64], n: usize, jitter: f64, l: &mut [f64]) -> std::result::Result<(), (usize, f64)> {
    for i in 0..n {
        let ri = i * (i + 1) / 2;
        for j in 0..=i {
            let rj = j * (j + 1) / 2;
            let mut s = a[ri + j];
            if i == j {
                s += jitter;
            }
            for k in 0..j {
                s -= l[ri + k] * l[rj + k];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return Err((i, s));
                }
                l[ri + i] = s.sqrt();
            } else {
                l[ri + j] = s / l[rj + j];
            }
        }
    }
    Ok(())
}

/// Factors a symmetric positive-definite matrix given in packed storage.
///
/// A clean factorization is attempted first; on failure the diagonal is
/// shifted by `1e-14 * max_diag`, escalating tenfold up to `1e-8 * max_diag`.
/// The error message reports the failing pivot of the final attempt.
pub fn cholesky_with_jitter(a: &[f64], n: usize) -> Result<CholeskyFactor> {
    if a.len() != packed_len(n) {
        return Err(CoreError::Data(format!(
            "packed matrix of order {n} needs {} entries, got {}",
            packed_len(n),
            a.len()
        )));
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(CoreError::Data("matrix entries must be finite".into()));
    }
    let max_diag = (0..n)
        .map(|i| a[packed_index(i, i)])
        .fold(0.0f64, |acc, v| acc.max(v.abs()));

    let mut l = vec![0.0; a.len()];
    let mut jitter = 0.0;
    loop {
        let (pivot, value) = match try_cholesky(a, n, jitter, &mut l) {
            Ok(()) => return Ok(CholeskyFactor { n, l, jitter }),
            Err(fail) => fail,
        };
        jitter = if jitter == 0.0 {
            1e-14 * max_diag
        } else {
            jitter * 10.0
        };
        if max_diag == 0.0 || jitter > 1e-8 * max_diag {
            return Err(CoreError::Numerical(format!(
                "Cholesky failed for order-{n} matrix: pivot {pivot} became {value:.6e} \
                 even with diagonal jitter {:.3e} (max diagonal {max_diag:.6e})",
                1e-8 * max_diag
            )));
        }
    }
}

impl CholeskyFactor {
    /// Dense lower-triangular product `y = L x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "dimension mismatch in triangular product");
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let row = &self.l[i * (i + 1) / 2..i * (i + 1) / 2 + i + 1];
            let mut acc = 0.0;
            for (lik, xk) in row.iter().zip(&x[..=i]) {
                acc += lik * xk;
            }
            y[i] = acc;
        }
        y
    }

    /// Reconstructs entry `(i, j)` of `L L^T`; used for verification.
    pub fn reconstruct(&self, i: usize, j: usize) -> f64 {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        let rhi = hi * (hi + 1) / 2;
        let rlo = lo * (lo + 1) / 2;
        (0..=lo).map(|k| self.l[rhi + k] * self.l[rlo + k]).sum()
    }
}
