//! Scalar part of one iteration: the left and right reflections applied to
//! the newest column of the Lanczos tridiagonal, the last three rows of
//! `L_k u_k = t_k`, and the norm estimates. No length-`n` work happens here.

use crate::rotations::{sym_ortho_finite, Rotation};

const EPS: f64 = f64::EPSILON;

/// Why `mu_k` was set to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// `|gamma_k^(4)|` is negligible relative to the norm estimate.
    Singular,
    /// Keeping `mu_k` would push the solution norm estimate past `maxxnorm`
    /// while the iteration behaves like a least-squares solve.
    Xnorm,
    /// The least-squares backward error test passed while the residual
    /// test did not, so the last column of `L_k` is taken to span the
    /// numerical null space.
    LeastSquares,
}

/// Quantities the caller needs from iteration `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepScalars {
    pub k: usize,
    /// Left reflection `(c_k1, s_k1)`.
    pub left: Rotation,
    /// First right reflection `P_{k-2,k}`.
    pub right1: Rotation,
    /// Second right reflection `P_{k-1,k}`.
    pub right2: Rotation,
    /// `gamma_k^(2)`, the diagonal of `R_k`.
    pub gamma2: f64,
    /// `delta_k^(2)`, the superdiagonal of `R_k`.
    pub delta2: f64,
    /// `epsilon_k`, the second superdiagonal of `R_k`.
    pub epsilon: f64,
    pub tau: f64,
    /// `mu_{k-2}^(3)`, final.
    pub mu_km2: f64,
    /// `mu_{k-1}^(2)`
    pub mu_km1: f64,
    pub mu_k: f64,
    pub truncation: Option<Truncation>,
    /// Residual norm estimate for the returned iterate. After a truncation
    /// it includes the component left unresolved by dropping `mu_k`.
    pub phi: f64,
    /// `phi_k = |s_k| phi_{k-1}` from the left reflection alone; monotone.
    pub phi_untruncated: f64,
    /// `psi_{k-1}`
    pub psi: f64,
    /// `||[gamma_k, delta_{k+1}]||`, so that `psi = phi_{k-1} * ls_factor`.
    pub ls_factor: f64,
    pub chi: f64,
    /// `||x_k||` without the `mu_k` term, `||[chi2, mu_{k-1}]||`.
    pub chi_prior: f64,
    /// `chi_{k-2}^(2)`
    pub chi2: f64,
    pub anorm: f64,
    pub acond: f64,
    pub omega: f64,
    /// `None` until a diagonal of `L` is available.
    pub gamma_min: Option<f64>,
}

/// Values from the end of iteration `k-1` that the phase transfer needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferSnapshot {
    /// `gamma_{k-2}^(5)`
    pub gamma_km2: f64,
    /// `vartheta_{k-1}`
    pub theta_km1: f64,
    /// `gamma_{k-1}^(4)`
    pub gamma_km1: f64,
    /// `mu_{k-2}^(2)`
    pub mu_km2: f64,
    /// `mu_{k-1}`
    pub mu_km1: f64,
}

/// Non-finite or zero-divisor condition inside the recurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarBreakdown {
    NonFinite,
    ZeroDiagonal,
}

/// Sliding window of recurrence scalars.
#[derive(Debug, Clone)]
pub struct Recurrence {
    k: usize,
    beta1: f64,
    maxxnorm: f64,
    tol: f64,
    left: Rotation,
    /// `delta_k`, before the previous left reflection.
    delta: f64,
    /// `epsilon_k`
    epsilon: f64,
    /// `gamma_{k-1}^(4)`
    gamma_l: f64,
    /// `gamma_{k-2}^(5)`
    gamma_l2: f64,
    /// `vartheta_{k-1}`
    theta_l: f64,
    /// `vartheta_{k-2}^(2)`
    theta_l2: f64,
    eta_l: f64,
    eta_l2: f64,
    tau_l: f64,
    tau_l2: f64,
    mu_l: f64,
    mu_l2: f64,
    mu_l3: f64,
    mu_l4: f64,
    phi: f64,
    /// `chi_{k-3}^(2)`
    chi2: f64,
    anorm: f64,
    gamma_min: Option<f64>,
    omega: f64,
}

impl Recurrence {
    /// `tol` is the backward error tolerance `max(rtol, eps)`.
    pub fn new(beta1: f64, maxxnorm: f64, tol: f64) -> Self {
        Self {
            k: 0,
            beta1,
            maxxnorm,
            tol,
            left: Rotation::INITIAL,
            delta: 0.0,
            epsilon: 0.0,
            gamma_l: 0.0,
            gamma_l2: 0.0,
            theta_l: 0.0,
            theta_l2: 0.0,
            eta_l: 0.0,
            eta_l2: 0.0,
            tau_l: 0.0,
            tau_l2: 0.0,
            mu_l: 0.0,
            mu_l2: 0.0,
            mu_l3: 0.0,
            mu_l4: 0.0,
            phi: beta1,
            chi2: 0.0,
            anorm: 0.0,
            gamma_min: None,
            omega: 0.0,
        }
    }

    pub fn snapshot(&self) -> TransferSnapshot {
        TransferSnapshot {
            gamma_km2: self.gamma_l2,
            theta_km1: self.theta_l,
            gamma_km1: self.gamma_l,
            mu_km2: self.mu_l2,
            mu_km1: self.mu_l,
        }
    }

    /// Advances to iteration `k + 1` given `alpha_k`, `beta_k` and
    /// `beta_{k+1}` from the Lanczos step.
    pub fn step(&mut self, alpha: f64, beta: f64, beta_next: f64) -> Result<StepScalars, ScalarBreakdown> {
        self.k += 1;
        let k = self.k;
        let Rotation { c: cs, s: sn, .. } = self.left;

        let rho = if k == 1 {
            alpha.hypot(beta_next)
        } else {
            beta.hypot(alpha).hypot(beta_next)
        };

        // Previous left reflection on the middle two entries of T e_k.
        let delta2 = cs * self.delta + sn * alpha;
        let gbar = sn * self.delta - cs * alpha;
        let epsilon = self.epsilon;
        let epsilon_next = sn * beta_next;
        let delta_next = -cs * beta_next;

        check(&[delta2, gbar, epsilon_next, delta_next])?;
        let left = sym_ortho_finite(gbar, beta_next);
        let gamma2 = left.r;

        // First right reflection, P_{k-2,k}.
        let (right1, gamma6_km2) = if k > 2 {
            let r = sym_ortho_finite(self.gamma_l2, epsilon);
            (r, Some(r.r))
        } else {
            (Rotation::INITIAL, None)
        };
        let (c2, s2) = (right1.c, right1.s);
        let delta3 = s2 * self.theta_l - c2 * delta2;
        let gamma3 = -c2 * gamma2;
        let eta = s2 * gamma2;
        let theta2_km1 = c2 * self.theta_l + s2 * delta2;

        // Second right reflection, P_{k-1,k}.
        let (right2, gamma5_km1) = if k > 1 {
            let r = sym_ortho_finite(self.gamma_l, delta3);
            (r, Some(r.r))
        } else {
            (Rotation::INITIAL, None)
        };
        let (c3, s3) = (right2.c, right2.s);
        let theta = s3 * gamma3;
        let gamma4 = -c3 * gamma3;

        let tau = left.c * self.phi;
        let phi_untruncated = left.s * self.phi;
        let mut phi = phi_untruncated;
        let ls_factor = gbar.hypot(delta_next);
        let psi = self.phi * ls_factor;

        let mut anorm = self.anorm.max(rho);
        for g in [gamma6_km2, gamma5_km1].into_iter().flatten() {
            anorm = anorm.max(g);
        }

        let mu_km2 = match gamma6_km2 {
            Some(g) => {
                if g == 0.0 {
                    return Err(ScalarBreakdown::ZeroDiagonal);
                }
                (self.tau_l2 - self.eta_l2 * self.mu_l4 - self.theta_l2 * self.mu_l3) / g
            }
            None => self.mu_l2,
        };
        let mu_km1 = match gamma5_km1 {
            Some(g) => {
                if g == 0.0 {
                    return Err(ScalarBreakdown::ZeroDiagonal);
                }
                (self.tau_l - self.eta_l * self.mu_l3 - theta2_km1 * mu_km2) / g
            }
            None => self.mu_l,
        };

        let chi2 = if k > 2 { self.chi2.hypot(mu_km2) } else { self.chi2 };
        let chi_tmp = chi2.hypot(mu_km1);
        let rhs = tau - eta * mu_km2 - theta * mu_km1;

        let mut truncation = None;
        let mut mu = 0.0;
        if gamma4.abs() <= EPS * anorm {
            truncation = Some(Truncation::Singular);
        } else {
            mu = rhs / gamma4;
            let like_ls = ls_factor < self.phi / (anorm * chi_tmp + self.beta1) * anorm;
            let a = anorm.max(gamma4.abs());
            // Judged without mu_k: a spurious tiny gamma_k inflates ||x|| and
            // with it the backward-error denominator.
            let solved = phi / (a * chi_tmp + self.beta1) <= self.tol;
            if !solved && ls_factor <= self.tol * a {
                truncation = Some(Truncation::LeastSquares);
                mu = 0.0;
            } else if chi_tmp.hypot(mu) >= self.maxxnorm && like_ls {
                truncation = Some(Truncation::Xnorm);
                mu = 0.0;
            }
        }
        if truncation.is_some() {
            phi = rhs.hypot(phi);
        } else {
            anorm = anorm.max(gamma4.abs());
        }
        let chi = chi_tmp.hypot(mu);

        // Running minimum over the diagonals of L that exist at this step.
        let mut candidates = [gamma6_km2, gamma5_km1, None];
        if truncation.is_none() {
            candidates[2] = Some(gamma4.abs());
        }
        let mut gamma_min = self.gamma_min;
        for g in candidates.into_iter().flatten() {
            gamma_min = Some(gamma_min.map_or(g, |m| m.min(g)));
        }
        let acond = match gamma_min {
            Some(g) if g > 0.0 => (anorm / g).max(1.0),
            Some(_) => f64::INFINITY,
            None => 1.0,
        };
        let omega = self.omega.hypot(tau);

        check(&[gamma2, gamma4, tau, phi, psi, mu, mu_km1, mu_km2, chi, anorm, omega])?;

        // Shift the window.
        self.left = left;
        self.delta = delta_next;
        self.epsilon = epsilon_next;
        self.gamma_l2 = gamma5_km1.unwrap_or(self.gamma_l);
        self.gamma_l = gamma4;
        self.theta_l2 = theta2_km1;
        self.theta_l = theta;
        self.eta_l2 = self.eta_l;
        self.eta_l = eta;
        self.tau_l2 = self.tau_l;
        self.tau_l = tau;
        self.mu_l4 = self.mu_l3;
        self.mu_l3 = mu_km2;
        self.mu_l2 = mu_km1;
        self.mu_l = mu;
        self.phi = phi;
        self.chi2 = chi2;
        self.anorm = anorm;
        self.gamma_min = gamma_min;
        self.omega = omega;

        Ok(StepScalars {
            k,
            left,
            right1,
            right2,
            gamma2,
            delta2,
            epsilon,
            tau,
            mu_km2,
            mu_km1,
            mu_k: mu,
            truncation,
            phi,
            phi_untruncated,
            psi,
            ls_factor,
            chi,
            chi_prior: chi_tmp,
            chi2,
            anorm,
            acond,
            omega,
            gamma_min,
        })
    }
}

fn check(values: &[f64]) -> Result<(), ScalarBreakdown> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(ScalarBreakdown::NonFinite)
    }
}
