//! Brute-force dense references used as ground truth in tests.
//!
//! The eigendecomposition is cyclic Jacobi, which shares no machinery with
//! the Krylov solver it is meant to check. Intended for `n <= 200`.

use crate::operators::{norm2, DenseSymMatrix};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("Jacobi sweeps did not converge after {sweeps} sweeps (off-diagonal mass {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },
    #[error("dimension mismatch: matrix is {n}x{n}, vector has length {len}")]
    DimensionMismatch { n: usize, len: usize },
}

const MAX_SWEEPS: usize = 100;

/// `A = Q diag(eigenvalues) Q'`, eigenvectors stored as the columns of a
/// row-major `n x n` array.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub n: usize,
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<f64>,
}

impl EigenDecomposition {
    /// Entry `(row, col)` of `Q`; column `col` is the `col`-th eigenvector.
    pub fn q(&self, row: usize, col: usize) -> f64 {
        self.eigenvectors[row * self.n + col]
    }

    pub fn eigenvector(&self, col: usize) -> Vec<f64> {
        (0..self.n).map(|r| self.q(r, col)).collect()
    }
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Sweeps until the off-diagonal Frobenius mass is at most `1e-14 ||A||_F`.
pub fn eigh_dense(a: &DenseSymMatrix) -> Result<EigenDecomposition, OracleError> {
    use crate::operators::SymmetricOperator;
    let n = a.dim();
    let mut m = a.entries().to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let target = 1e-14 * a.frobenius_norm();

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&m, n);
        if off <= target {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(OracleError::NoConvergence { sweeps, off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // M <- J' M J, touching rows/cols p and q
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    Ok(EigenDecomposition {
        n,
        eigenvalues: (0..n).map(|i| m[i * n + i]).collect(),
        eigenvectors: v,
    })
}

/// Default relative cutoff for [`pseudo_solve_dense`]: `n * eps`.
pub fn default_rank_tol(n: usize) -> f64 {
    n.max(1) as f64 * f64::EPSILON
}

/// Minimum-length least-squares solution of `(A - sigma I) x ~ b` via the
/// eigendecomposition: eigenvalues with `|lambda - sigma| <= rank_tol *
/// max|lambda - sigma|` are treated as zero.
pub fn pseudo_solve_dense(
    a: &DenseSymMatrix,
    b: &[f64],
    sigma: f64,
    rank_tol: f64,
) -> Result<Vec<f64>, OracleError> {
    let eig = eigh_dense(a)?;
    pseudo_solve_with(&eig, b, sigma, rank_tol)
}

/// [`pseudo_solve_dense`] reusing a precomputed decomposition.
pub fn pseudo_solve_with(
    eig: &EigenDecomposition,
    b: &[f64],
    sigma: f64,
    rank_tol: f64,
) -> Result<Vec<f64>, OracleError> {
    let n = eig.n;
    if b.len() != n {
        return Err(OracleError::DimensionMismatch { n, len: b.len() });
    }
    let shifted: Vec<f64> = eig.eigenvalues.iter().map(|l| l - sigma).collect();
    let lmax = shifted.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
    let cutoff = rank_tol * lmax;
    let mut x = vec![0.0; n];
    for (j, &l) in shifted.iter().enumerate() {
        if lmax == 0.0 || l.abs() <= cutoff {
            continue;
        }
        let coeff: f64 = (0..n).map(|i| eig.q(i, j) * b[i]).sum::<f64>() / l;
        for (i, xi) in x.iter_mut().enumerate() {
            *xi += coeff * eig.q(i, j);
        }
    }
    Ok(x)
}

/// Numerical rank of `A - sigma I` under the same cutoff as
/// [`pseudo_solve_with`].
pub fn numerical_rank(eig: &EigenDecomposition, sigma: f64, rank_tol: f64) -> usize {
    let lmax = eig.eigenvalues.iter().fold(0.0_f64, |m, l| m.max((l - sigma).abs()));
    eig.eigenvalues
        .iter()
        .filter(|l| lmax > 0.0 && (*l - sigma).abs() > rank_tol * lmax)
        .count()
}

/// Dense `y = A x` using nothing but the stored entries.
pub fn dense_matvec(a: &DenseSymMatrix, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n).map(|i| (0..n).map(|j| a.get(i, j) * x[j]).sum()).collect()
}

/// `||b - (A - sigma I) x||_2` evaluated densely.
pub fn residual_norm(a: &DenseSymMatrix, b: &[f64], sigma: f64, x: &[f64]) -> f64 {
    let ax = dense_matvec(a, x);
    let r: Vec<f64> = (0..b.len()).map(|i| b[i] - ax[i] + sigma * x[i]).collect();
    norm2(&r)
}
