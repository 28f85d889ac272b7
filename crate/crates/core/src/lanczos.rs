//! The symmetric Lanczos process, optionally preconditioned.
//!
//! The state carries the scaled vectors `z_k = beta_k M^{1/2} v_k` and
//! `q_k = beta_k M^{-1/2} v_k` with `M q_k = z_k`, so the unit Lanczos vector
//! is never formed. Each step makes exactly one operator product and at most
//! one preconditioner solve.
//!
//! Without a preconditioner `q` and `z` share storage and the step uses the
//! reordered recurrence that subtracts the `z_{k-1}` term before `alpha_k` is
//! formed. The preconditioned step follows the plain three-term form.

use crate::operators::{dot, norm2, shifted_apply_into, Preconditioner, SymmetricOperator};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum LanczosError {
    #[error("preconditioner is not positive definite (q'z = {value:e} at step {step})")]
    NotPositiveDefinite { step: usize, value: f64 },
    #[error("non-finite Lanczos coefficient at step {step}")]
    NonFinite { step: usize },
}

/// Running state of the Lanczos process.
///
/// After step `k`: [`alpha`](Self::alpha) is `alpha_k`, [`beta`](Self::beta)
/// is `beta_k` (the scale of [`q_used`](Self::q_used)), and
/// [`beta_next`](Self::beta_next) is `beta_{k+1}`.
#[derive(Debug, Clone)]
pub struct LanczosState {
    k: usize,
    alpha: f64,
    beta_prev: f64,
    beta: f64,
    beta_next: f64,
    // q'z as computed, so alpha avoids the rounding of sqrt then square.
    beta_sq: f64,
    beta_next_sq: f64,
    z_prev: Vec<f64>,
    z_curr: Vec<f64>,
    // Preconditioned: q_{k} and q_{k+1}. Identity: a single scratch buffer
    // in `q_prev` and `q_curr` left empty.
    q_prev: Vec<f64>,
    q_curr: Vec<f64>,
    preconditioned: bool,
}

/// Relative size below which a negative `q'z` is read as roundoff.
fn clamp_negative(step: usize, qz: f64, q: &[f64], z: &[f64]) -> Result<f64, LanczosError> {
    if qz >= 0.0 {
        return Ok(qz);
    }
    if -qz <= f64::EPSILON * norm2(q) * norm2(z) {
        Ok(0.0)
    } else {
        Err(LanczosError::NotPositiveDefinite { step, value: qz })
    }
}

/// `||v||^2`, summed directly unless that overflows.
fn square(norm: f64, v: &[f64]) -> f64 {
    let sq = dot(v, v);
    if sq.is_finite() && sq > 0.0 {
        sq
    } else {
        norm * norm
    }
}

impl LanczosState {
    /// Sets `z_0 = 0`, `z_1 = b`, solves `M q_1 = b` and `beta_1 = sqrt(b'q_1)`.
    ///
    /// `beta_1 == 0` flags the `b = 0` case.
    pub fn initialize(b: &[f64], precond: Option<&dyn Preconditioner>) -> Result<Self, LanczosError> {
        let n = b.len();
        let z_curr = b.to_vec();
        let (beta1, beta1_sq, q_prev, q_curr) = match precond {
            Some(m) => {
                let mut q = vec![0.0; n];
                m.solve_into(b, &mut q);
                let qz = dot(b, &q);
                // For positive definite M, b != 0 forces b' M^{-1} b > 0.
                if qz <= 0.0 && b.iter().any(|&v| v != 0.0) {
                    return Err(LanczosError::NotPositiveDefinite { step: 0, value: qz });
                }
                let qz = qz.abs();
                (qz.sqrt(), qz, vec![0.0; n], q)
            }
            None => {
                let beta = norm2(b);
                (beta, square(beta, b), vec![0.0; n], Vec::new())
            }
        };
        if !beta1.is_finite() {
            return Err(LanczosError::NonFinite { step: 0 });
        }
        Ok(Self {
            k: 0,
            alpha: 0.0,
            beta_prev: 0.0,
            beta: 0.0,
            beta_next: beta1,
            beta_sq: 0.0,
            beta_next_sq: beta1_sq,
            z_prev: vec![0.0; n],
            z_curr,
            q_prev,
            q_curr,
            preconditioned: precond.is_some(),
        })
    }

    /// Performs step `k + 1`.
    ///
    /// `precond` must be the same preconditioner passed to
    /// [`initialize`](Self::initialize).
    pub fn step<A: SymmetricOperator + ?Sized>(
        &mut self,
        op: &A,
        precond: Option<&dyn Preconditioner>,
        sigma: f64,
    ) -> Result<(), LanczosError> {
        debug_assert_eq!(precond.is_some(), self.preconditioned);
        debug_assert!(self.beta_next > 0.0);
        self.k += 1;
        let k = self.k;
        self.beta_prev = self.beta;
        self.beta = self.beta_next;
        let beta = self.beta;
        self.beta_sq = self.beta_next_sq;
        let beta_sq = self.beta_sq;

        match precond {
            None => {
                // p = (A - sigma I) z_k - (beta_k^2 / beta_{k-1}) z_{k-1}
                let p = &mut self.q_prev;
                shifted_apply_into(op, sigma, &self.z_curr, p);
                if k > 1 {
                    let f = beta_sq / self.beta_prev;
                    for (pi, &zp) in p.iter_mut().zip(&self.z_prev) {
                        *pi -= f * zp;
                    }
                }
                let alpha = dot(&self.z_curr, p) / beta_sq;
                let inv = 1.0 / beta;
                for (pi, &zc) in p.iter_mut().zip(&self.z_curr) {
                    *pi = (*pi - alpha * zc) * inv;
                }
                self.alpha = alpha;
                self.beta_next = norm2(p);
                self.beta_next_sq = square(self.beta_next, p);
                // z_prev <- z_k, z_curr <- z_{k+1}, scratch <- z_{k-1}
                std::mem::swap(&mut self.z_prev, &mut self.z_curr);
                std::mem::swap(&mut self.z_curr, &mut self.q_prev);
            }
            Some(m) => {
                // q_prev holds the dead q_{k-1}: reuse it for p.
                let p = &mut self.q_prev;
                shifted_apply_into(op, sigma, &self.q_curr, p);
                let alpha = dot(&self.q_curr, p) / beta_sq;
                let inv = 1.0 / beta;
                let a_over = alpha / beta;
                let b_over = if k > 1 { beta / self.beta_prev } else { 0.0 };
                // z_{k+1} overwrites z_{k-1}
                for ((zp, &pi), &zc) in self.z_prev.iter_mut().zip(p.iter()).zip(&self.z_curr) {
                    *zp = inv * pi - a_over * zc - b_over * *zp;
                }
                m.solve_into(&self.z_prev, p);
                let qz = clamp_negative(k, dot(p, &self.z_prev), p, &self.z_prev)?;
                self.alpha = alpha;
                self.beta_next = qz.sqrt();
                self.beta_next_sq = qz;
                std::mem::swap(&mut self.z_prev, &mut self.z_curr);
                std::mem::swap(&mut self.q_prev, &mut self.q_curr);
            }
        }
        if !(self.alpha.is_finite() && self.beta_next.is_finite()) {
            return Err(LanczosError::NonFinite { step: k });
        }
        Ok(())
    }

    /// Number of completed steps.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn beta_prev(&self) -> f64 {
        self.beta_prev
    }

    pub fn beta_next(&self) -> f64 {
        self.beta_next
    }

    /// `q_k`, the (scaled) basis vector that produced the latest `alpha_k`.
    /// Before the first step this is `q_1`.
    pub fn q_used(&self) -> &[f64] {
        match (self.preconditioned, self.k) {
            (true, 0) => &self.q_curr,
            (true, _) => &self.q_prev,
            (false, 0) => &self.z_curr,
            (false, _) => &self.z_prev,
        }
    }

    /// `z_{k+1}`, the most recently produced residual-like vector.
    pub fn z_curr(&self) -> &[f64] {
        &self.z_curr
    }

    /// `z_k`, i.e. the vector preceding [`z_curr`](Self::z_curr).
    pub fn z_prev(&self) -> &[f64] {
        &self.z_prev
    }

    /// `q_{k+1}` with `M q_{k+1} = z_{k+1}` (equal to `z_curr` without a
    /// preconditioner).
    pub fn q_curr(&self) -> &[f64] {
        if self.preconditioned {
            &self.q_curr
        } else {
            &self.z_curr
        }
    }

    /// Length-`n` buffers owned by the state.
    pub fn work_vectors(&self) -> usize {
        if self.preconditioned {
            4
        } else {
            3
        }
    }
}
