//! Operator and preconditioner contracts plus the concrete backends shipped
//! with the crate.
//!
//! The solver only ever sees `A` through [`SymmetricOperator::apply_into`] and
//! `M` through [`Preconditioner::solve_into`]. Both write into caller-owned
//! buffers so that the iteration controls every length-`n` allocation.
//!
//! All shipped types are immutable after construction and can be shared
//! across threads for concurrent solves.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

/// Errors raised by operator construction and the checked entry points.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OperatorError {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite entry at position {index}")]
    NonFinite { index: usize },
    #[error("matrix is not symmetric: entry ({row}, {col}) = {upper} but ({col}, {row}) = {lower}")]
    NotSymmetric {
        row: usize,
        col: usize,
        upper: f64,
        lower: f64,
    },
    #[error("index ({row}, {col}) out of range for dimension {n}")]
    IndexOutOfRange { row: usize, col: usize, n: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// A real symmetric linear operator `y = A x`.
///
/// Implementations must be deterministic and must not retain or modify `x`.
/// Symmetry is a contract that can be probed with [`check_symmetry`].
pub trait SymmetricOperator {
    fn dim(&self) -> usize;

    /// Overwrites `y` with `A x`. Both slices have length [`dim`](Self::dim).
    fn apply_into(&self, x: &[f64], y: &mut [f64]);
}

/// A symmetric positive-definite preconditioner, applied as a solve `M q = z`.
pub trait Preconditioner {
    fn dim(&self) -> usize;

    /// Overwrites `q` with `M^{-1} z`.
    fn solve_into(&self, z: &[f64], q: &mut [f64]);
}

impl<T: SymmetricOperator + ?Sized> SymmetricOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        (**self).apply_into(x, y)
    }
}

impl<T: Preconditioner + ?Sized> Preconditioner for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn solve_into(&self, z: &[f64], q: &mut [f64]) {
        (**self).solve_into(z, q)
    }
}

fn check_input(n: usize, v: &[f64]) -> Result<(), OperatorError> {
    if v.len() != n {
        return Err(OperatorError::DimensionMismatch {
            expected: n,
            found: v.len(),
        });
    }
    if let Some(index) = v.iter().position(|x| !x.is_finite()) {
        return Err(OperatorError::NonFinite { index });
    }
    Ok(())
}

/// Returns `A v`, validating the length and finiteness of `v`.
pub fn apply<A: SymmetricOperator + ?Sized>(op: &A, v: &[f64]) -> Result<Vec<f64>, OperatorError> {
    check_input(op.dim(), v)?;
    let mut y = vec![0.0; op.dim()];
    op.apply_into(v, &mut y);
    Ok(y)
}

/// Returns `A q - sigma q` using exactly one call to `apply_into`.
///
/// With `sigma == 0` no arithmetic is performed on the product, so the result
/// is bitwise identical to [`apply`].
pub fn shifted_apply<A: SymmetricOperator + ?Sized>(
    op: &A,
    sigma: f64,
    q: &[f64],
) -> Result<Vec<f64>, OperatorError> {
    check_input(op.dim(), q)?;
    let mut y = vec![0.0; op.dim()];
    shifted_apply_into(op, sigma, q, &mut y);
    Ok(y)
}

/// Unchecked form of [`shifted_apply`] writing into `out`.
pub fn shifted_apply_into<A: SymmetricOperator + ?Sized>(op: &A, sigma: f64, q: &[f64], out: &mut [f64]) {
    op.apply_into(q, out);
    if sigma != 0.0 {
        for (o, &qi) in out.iter_mut().zip(q) {
            *o -= sigma * qi;
        }
    }
}

/// Returns `M^{-1} z`, validating the length and finiteness of `z`.
pub fn precondition<M: Preconditioner + ?Sized>(m: &M, z: &[f64]) -> Result<Vec<f64>, OperatorError> {
    check_input(m.dim(), z)?;
    let mut q = vec![0.0; m.dim()];
    m.solve_into(z, &mut q);
    Ok(q)
}

/// Default relative tolerance for [`check_symmetry`]: the cube root of the
/// 64-bit unit roundoff.
pub fn default_symmetry_tol() -> f64 {
    f64::EPSILON.cbrt()
}

/// Default number of probe pairs for [`check_symmetry`].
pub const DEFAULT_SYMMETRY_TRIALS: usize = 2;

/// The probe pair that exposed an asymmetry.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryWitness {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// `|x'(Ay) - y'(Ax)|`
    pub discrepancy: f64,
    /// `tol * (|Ax||y| + |x||Ay| + floor)`, the bound that was exceeded.
    pub threshold: f64,
}

/// Outcome of a statistical symmetry probe.
#[derive(Debug, Clone, PartialEq)]
pub enum SymmetryCheck {
    Pass,
    Fail(SymmetryWitness),
}

impl SymmetryCheck {
    pub fn passed(&self) -> bool {
        matches!(self, SymmetryCheck::Pass)
    }
}

/// Probes `op` with `trials` pairs of standard-normal vectors and fails on
/// the first pair with `|x'(Ay) - y'(Ax)| > tol (|Ax||y| + |x||Ay| + floor)`.
///
/// The tiny floor (`f64::MIN_POSITIVE`) keeps the zero operator passing.
/// The relative scale `tol` has no canonical value; [`default_symmetry_tol`]
/// is the crate's choice.
pub fn check_symmetry<A: SymmetricOperator + ?Sized>(
    op: &A,
    trials: usize,
    tol: f64,
    rng_seed: u64,
) -> Result<SymmetryCheck, OperatorError> {
    if trials == 0 {
        return Err(OperatorError::InvalidArgument("trials must be at least 1".into()));
    }
    let n = op.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut ax = vec![0.0; n];
    let mut ay = vec![0.0; n];
    for _ in 0..trials {
        let x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let y: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        op.apply_into(&x, &mut ax);
        op.apply_into(&y, &mut ay);
        let discrepancy = (dot(&x, &ay) - dot(&y, &ax)).abs();
        let threshold = tol * (norm2(&ax) * norm2(&y) + norm2(&x) * norm2(&ay) + f64::MIN_POSITIVE);
        if !(discrepancy <= threshold) {
            return Ok(SymmetryCheck::Fail(SymmetryWitness {
                x,
                y,
                discrepancy,
                threshold,
            }));
        }
    }
    Ok(SymmetryCheck::Pass)
}

/// Views a preconditioner's solve `z -> M^{-1} z` as an operator, so that
/// [`check_symmetry`] can probe it.
pub struct PreconditionerSolve<'a, M: ?Sized>(pub &'a M);

impl<M: Preconditioner + ?Sized> SymmetricOperator for PreconditionerSolve<'_, M> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        self.0.solve_into(x, y)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    // scaled to stay finite for entries near the overflow threshold
    let scale = a.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let inv = 1.0 / scale;
    scale * a.iter().map(|x| (x * inv) * (x * inv)).sum::<f64>().sqrt()
}

/// Access to the main diagonal, used to build a Jacobi preconditioner.
pub trait Diagonal {
    fn diagonal(&self) -> Vec<f64>;
}

/// The `n x n` identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentityOperator {
    n: usize,
}

impl IdentityOperator {
    pub fn new(n: usize) -> Self {
        Self { n }
    }
}

impl SymmetricOperator for IdentityOperator {
    fn dim(&self) -> usize {
        self.n
    }
    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        y.copy_from_slice(x);
    }
}

/// A diagonal matrix `diag(d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalOperator {
    entries: Vec<f64>,
}

impl DiagonalOperator {
    pub fn new(entries: Vec<f64>) -> Result<Self, OperatorError> {
        check_input(entries.len(), &entries)?;
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }
}

impl SymmetricOperator for DiagonalOperator {
    fn dim(&self) -> usize {
        self.entries.len()
    }
    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        for ((yi, &xi), &d) in y.iter_mut().zip(x).zip(&self.entries) {
            *yi = d * xi;
        }
    }
}

impl Diagonal for DiagonalOperator {
    fn diagonal(&self) -> Vec<f64> {
        self.entries.clone()
    }
}

/// Dense symmetric matrix in full row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DenseSymMatrix {
    /// Builds from row-major entries; symmetry must hold exactly.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self, OperatorError> {
        if entries.len() != n * n {
            return Err(OperatorError::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        check_input(n * n, &entries)?;
        for i in 0..n {
            for j in (i + 1)..n {
                let upper = entries[i * n + j];
                let lower = entries[j * n + i];
                if upper != lower {
                    return Err(OperatorError::NotSymmetric {
                        row: i,
                        col: j,
                        upper,
                        lower,
                    });
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, OperatorError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(OperatorError::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::new(n, entries)
    }

    pub fn from_diagonal(d: &[f64]) -> Result<Self, OperatorError> {
        let n = d.len();
        let mut entries = vec![0.0; n * n];
        for (i, &v) in d.iter().enumerate() {
            entries[i * n + i] = v;
        }
        Self::new(n, entries)
    }

    /// Symmetrizes an arbitrary square matrix as `(B + B') / 2`.
    pub fn symmetrized(n: usize, entries: &[f64]) -> Result<Self, OperatorError> {
        if entries.len() != n * n {
            return Err(OperatorError::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        let mut sym = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                sym[i * n + j] = 0.5 * (entries[i * n + j] + entries[j * n + i]);
            }
        }
        Self::new(n, sym)
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![0.0; n * n],
        }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.n + col]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm2(&self.entries)
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().filter(|&&v| v != 0.0).count()
    }
}

impl SymmetricOperator for DenseSymMatrix {
    fn dim(&self) -> usize {
        self.n
    }
    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = dot(&self.entries[i * self.n..(i + 1) * self.n], x);
        }
    }
}

impl Diagonal for DenseSymMatrix {
    fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }
}

/// Sparse symmetric matrix storing the lower triangle (with diagonal) in
/// compressed rows. Off-diagonal entries are mirrored on the fly.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSymMatrix {
    /// Assembles from `(row, col, value)` triplets, 0-based.
    ///
    /// A triplet `(i, j, v)` sets both `A[i][j]` and `A[j][i]`; entries above
    /// the diagonal are moved to their lower-triangle mirror. Repeated
    /// positions are summed.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self, OperatorError> {
        let mut lower: Vec<(usize, usize, f64)> = Vec::with_capacity(triplets.len());
        for (k, &(row, col, v)) in triplets.iter().enumerate() {
            if row >= n || col >= n {
                return Err(OperatorError::IndexOutOfRange { row, col, n });
            }
            if !v.is_finite() {
                return Err(OperatorError::NonFinite { index: k });
            }
            let (r, c) = if row >= col { (row, col) } else { (col, row) };
            lower.push((r, c, v));
        }
        lower.sort_by_key(|e| (e.0, e.1));

        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(lower.len());
        let mut values: Vec<f64> = Vec::with_capacity(lower.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in lower {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
                continue;
            }
            last = Some((r, c));
            row_ptr[r + 1] += 1;
            col_idx.push(c);
            values.push(v);
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self {
            n,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// Number of stored entries (lower triangle including the diagonal).
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Stored `(row, col, value)` entries with `row >= col`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.col_idx[k], self.values[k]))
        })
    }

    pub fn to_dense(&self) -> DenseSymMatrix {
        let n = self.n;
        let mut entries = vec![0.0; n * n];
        for (r, c, v) in self.iter() {
            entries[r * n + c] = v;
            entries[c * n + r] = v;
        }
        DenseSymMatrix { n, entries }
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut sum = 0.0;
        for (r, c, v) in self.iter() {
            sum += if r == c { v * v } else { 2.0 * v * v };
        }
        sum.sqrt()
    }
}

impl SymmetricOperator for SparseSymMatrix {
    fn dim(&self) -> usize {
        self.n
    }
    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        y.fill(0.0);
        for r in 0..self.n {
            let mut acc = 0.0;
            let xr = x[r];
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.col_idx[k];
                let v = self.values[k];
                acc += v * x[c];
                if c != r {
                    y[c] += v * xr;
                }
            }
            y[r] += acc;
        }
    }
}

impl Diagonal for SparseSymMatrix {
    fn diagonal(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for (r, c, v) in self.iter() {
            if r == c {
                d[r] = v;
            }
        }
        d
    }
}

/// Matrix-free operator backed by a closure `f(x, y)` that writes `A x`
/// into `y`.
pub struct FnOperator<F> {
    n: usize,
    f: F,
}

impl<F: Fn(&[f64], &mut [f64])> FnOperator<F> {
    pub fn new(n: usize, f: F) -> Self {
        Self { n, f }
    }
}

impl<F: Fn(&[f64], &mut [f64])> SymmetricOperator for FnOperator<F> {
    fn dim(&self) -> usize {
        self.n
    }
    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        (self.f)(x, y)
    }
}

/// Preconditioner backed by a closure `f(z, q)` that writes `M^{-1} z` into `q`.
pub struct FnPreconditioner<F> {
    n: usize,
    f: F,
}

impl<F: Fn(&[f64], &mut [f64])> FnPreconditioner<F> {
    pub fn new(n: usize, f: F) -> Self {
        Self { n, f }
    }
}

impl<F: Fn(&[f64], &mut [f64])> Preconditioner for FnPreconditioner<F> {
    fn dim(&self) -> usize {
        self.n
    }
    fn solve_into(&self, z: &[f64], q: &mut [f64]) {
        (self.f)(z, q)
    }
}

/// Diagonal preconditioner `M = diag(m)`, stored as `1 / m`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiPreconditioner {
    inverse_diagonal: Vec<f64>,
}

impl JacobiPreconditioner {
    /// Builds `M^{-1} = diag(inverse_diagonal)`; entries must be finite and > 0.
    pub fn from_inverse_diagonal(inverse_diagonal: Vec<f64>) -> Result<Self, OperatorError> {
        if let Some(index) = inverse_diagonal.iter().position(|&v| !(v.is_finite() && v > 0.0)) {
            return Err(OperatorError::InvalidArgument(format!(
                "inverse diagonal entry {index} is {} (must be finite and positive)",
                inverse_diagonal[index]
            )));
        }
        Ok(Self { inverse_diagonal })
    }

    /// Builds `M = diag(d)`; entries must be finite and > 0.
    pub fn from_diagonal(d: &[f64]) -> Result<Self, OperatorError> {
        Self::from_inverse_diagonal(d.iter().map(|&v| 1.0 / v).collect())
    }

    /// `inverse_diagonal[i] = 1 / max(|A[i][i]|, floor)`, so `M` is SPD even
    /// when `A` is indefinite or has zero diagonal entries.
    pub fn from_matrix<A: Diagonal + ?Sized>(matrix: &A, floor: f64) -> Result<Self, OperatorError> {
        if !(floor > 0.0 && floor.is_finite()) {
            return Err(OperatorError::InvalidArgument(format!(
                "floor must be positive and finite, got {floor}"
            )));
        }
        let inverse_diagonal = matrix.diagonal().iter().map(|d| 1.0 / d.abs().max(floor)).collect();
        Self::from_inverse_diagonal(inverse_diagonal)
    }

    /// Like [`from_matrix`](Self::from_matrix) with `floor = rel_floor *
    /// max_i |A[i][i]|` (or `1` when the diagonal is zero).
    pub fn from_matrix_relative<A: Diagonal + ?Sized>(matrix: &A, rel_floor: f64) -> Result<Self, OperatorError> {
        let dmax = matrix.diagonal().iter().fold(0.0_f64, |m, d| m.max(d.abs()));
        let floor = if dmax > 0.0 { rel_floor * dmax } else { 1.0 };
        Self::from_matrix(matrix, floor)
    }

    pub fn inverse_diagonal(&self) -> &[f64] {
        &self.inverse_diagonal
    }
}

impl Preconditioner for JacobiPreconditioner {
    fn dim(&self) -> usize {
        self.inverse_diagonal.len()
    }
    fn solve_into(&self, z: &[f64], q: &mut [f64]) {
        for ((qi, &zi), &w) in q.iter_mut().zip(z).zip(&self.inverse_diagonal) {
            *qi = w * zi;
        }
    }
}
