//! MINRES-QLP for `(A - sigma I) x ~ b`.
//!
//! Each iteration does one Lanczos step, applies the left reflection that
//! extends the QR factorization of the tridiagonal, and two right
//! reflections that turn `R_k` into the lower-triangular `L_k`. While the
//! condition estimate stays below `trancond` the solution is updated with
//! MINRES direction vectors; past it (or once the last diagonal collapses)
//! the solver switches to the QLP update, which can drop the last column of
//! `L_k` and so returns the minimum-length solution of singular problems.

mod config;
mod recurrence;
mod report;

pub use config::SolverConfig;
pub use recurrence::Truncation;
pub use report::{Phase, SolveReport, StopClass, StopReason, TraceRecord};

use crate::lanczos::{LanczosError, LanczosState};
use crate::operators::{check_symmetry, default_symmetry_tol, Preconditioner, PreconditionerSolve, SymmetricOperator, DEFAULT_SYMMETRY_TRIALS};
use recurrence::{Recurrence, ScalarBreakdown, StepScalars, TransferSnapshot};
use thiserror::Error;

const EPS: f64 = f64::EPSILON;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("dimension mismatch: {what} has length {found}, operator has dimension {expected}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("right-hand side entry {index} is not finite")]
    NonFiniteRhs { index: usize },
    #[error("numerical breakdown at iteration {iteration}: {detail}")]
    Breakdown { iteration: usize, detail: String },
}

/// Solves `(A - sigma I) x ~ b` with optional preconditioner `M`.
///
/// Erroneous inputs found by the optional symmetry probes or by the online
/// positive-definiteness test are reported through [`SolveReport::stop`],
/// not as `Err`.
pub fn solve<A: SymmetricOperator + ?Sized>(
    op: &A,
    b: &[f64],
    config: &SolverConfig,
    precond: Option<&dyn Preconditioner>,
) -> Result<SolveReport, SolveError> {
    solve_with_observer(op, b, config, precond, |_| {})
}

/// [`solve`], calling `observer` once per completed iteration.
pub fn solve_with_observer<A, F>(
    op: &A,
    b: &[f64],
    config: &SolverConfig,
    precond: Option<&dyn Preconditioner>,
    mut observer: F,
) -> Result<SolveReport, SolveError>
where
    A: SymmetricOperator + ?Sized,
    F: FnMut(&TraceRecord),
{
    config.validate()?;
    let n = op.dim();
    if b.len() != n {
        return Err(SolveError::DimensionMismatch {
            what: "b",
            expected: n,
            found: b.len(),
        });
    }
    if let Some(m) = precond {
        if m.dim() != n {
            return Err(SolveError::DimensionMismatch {
                what: "preconditioner",
                expected: n,
                found: m.dim(),
            });
        }
    }
    if let Some(index) = b.iter().position(|v| !v.is_finite()) {
        return Err(SolveError::NonFiniteRhs { index });
    }

    let mut out = Output::new(n);
    let probe_tol = default_symmetry_tol();
    if config.check_operator {
        let probe = check_symmetry(op, DEFAULT_SYMMETRY_TRIALS, probe_tol, config.check_seed)
            .map_err(|e| SolveError::InvalidConfig(e.to_string()))?;
        if !probe.passed() {
            return Ok(out.finish(StopReason::OperatorNotSymmetric));
        }
    }
    if let (true, Some(m)) = (config.check_preconditioner, precond) {
        let probe = check_symmetry(&PreconditionerSolve(m), DEFAULT_SYMMETRY_TRIALS, probe_tol, config.check_seed)
            .map_err(|e| SolveError::InvalidConfig(e.to_string()))?;
        if !probe.passed() {
            return Ok(out.finish(StopReason::PrecondNotSymmetric));
        }
    }

    let mut lanczos = match LanczosState::initialize(b, precond) {
        Ok(s) => s,
        Err(LanczosError::NotPositiveDefinite { .. }) => {
            return Ok(out.finish(StopReason::PrecondNotPositiveDefinite));
        }
        Err(LanczosError::NonFinite { step }) => return Err(breakdown(step, "beta_1 is not finite")),
    };
    let beta1 = lanczos.beta_next();
    out.beta1 = beta1;
    out.estimates.rnorm = beta1;
    out.work_vectors = lanczos.work_vectors();
    if beta1 == 0.0 {
        return Ok(out.finish(StopReason::BetaZeroBIsZero));
    }

    let itnlim = config.iteration_limit(n);
    let cond_limit = config.acondlim.min(0.1 / EPS);
    let tol = config.rtol.max(EPS);

    let mut rec = Recurrence::new(beta1, config.maxxnorm, tol);
    let mut dirs = Directions::new(n);
    out.work_vectors += 2;
    let mut phase = Phase::Minres;

    loop {
        let snapshot = rec.snapshot();
        match lanczos.step(op, precond, config.sigma) {
            Ok(()) => {}
            Err(LanczosError::NotPositiveDefinite { .. }) => {
                out.iterations = lanczos.k();
                return Ok(out.finish(StopReason::PrecondNotPositiveDefinite));
            }
            Err(LanczosError::NonFinite { step }) => return Err(breakdown(step, "non-finite Lanczos coefficient")),
        }
        let k = lanczos.k();
        out.iterations = k;
        let s = rec.step(lanczos.alpha(), lanczos.beta(), lanczos.beta_next()).map_err(|e| match e {
            ScalarBreakdown::NonFinite => breakdown(k, "non-finite recurrence scalar"),
            ScalarBreakdown::ZeroDiagonal => breakdown(k, "zero diagonal in L_k"),
        })?;

        let estimates = Estimates::from_step(&s);
        let stop = evaluate_stop(&s, &estimates, lanczos.beta_next(), beta1, tol, itnlim, cond_limit, config.maxxnorm);
        let go_qlp = phase == Phase::Qlp || s.acond >= config.trancond || s.truncation.is_some() || s.gamma2 == 0.0;

        observer_record(&mut observer, &mut out, k, if go_qlp { Phase::Qlp } else { Phase::Minres }, &estimates, &s, beta1, config.trace);

        // A regularization limit hands back the last iterate within limits.
        let keep_previous = matches!(stop, Some(StopReason::CondLimit))
            || (stop == Some(StopReason::XnormLimit) && s.truncation != Some(Truncation::Xnorm));
        if keep_previous {
            out.solution_iteration = k - 1;
            return Ok(out.finish(stop.unwrap()));
        }

        let v_scale = 1.0 / lanczos.beta();
        let q = lanczos.q_used();
        if phase == Phase::Minres && go_qlp {
            dirs.transfer(&out.x, &snapshot);
            out.work_vectors += 1;
            out.phase_transfer_iteration = Some(k);
            phase = Phase::Qlp;
        }
        match phase {
            Phase::Minres => dirs.minres_update(&mut out.x, q, v_scale, &s),
            Phase::Qlp => dirs.qlp_update(&mut out.x, q, v_scale, &s),
        }
        out.estimates = estimates;
        out.solution_iteration = k;
        if s.truncation.is_some() {
            out.rank_deficient_iteration = Some(k);
        }
        if let Some(reason) = stop {
            return Ok(out.finish(reason));
        }
    }
}

fn breakdown(iteration: usize, detail: &str) -> SolveError {
    SolveError::Breakdown {
        iteration,
        detail: detail.to_string(),
    }
}

#[allow(clippy::too_many_arguments)]
fn observer_record<F: FnMut(&TraceRecord)>(
    observer: &mut F,
    out: &mut Output,
    k: usize,
    phase: Phase,
    e: &Estimates,
    s: &StepScalars,
    beta1: f64,
    keep: bool,
) {
    let rec = TraceRecord {
        k,
        phase,
        rnorm: s.phi_untruncated,
        arnorm: e.arnorm,
        xnorm: e.xnorm,
        xl2norm: s.chi2,
        anorm: e.anorm,
        acond: e.acond,
        axnorm: e.axnorm,
        gamma_min: s.gamma_min.unwrap_or(0.0),
        nrbe: s.phi_untruncated / (e.anorm * e.xnorm + beta1),
    };
    observer(&rec);
    if keep {
        out.trace.push(rec);
    }
}

/// Stop tests in priority order: degenerate right-hand side, backward errors,
/// regularization limits, then Lanczos and factorization limits.
#[allow(clippy::too_many_arguments)]
fn evaluate_stop(
    s: &StepScalars,
    e: &Estimates,
    beta_next: f64,
    beta1: f64,
    tol: f64,
    itnlim: usize,
    cond_limit: f64,
    maxxnorm: f64,
) -> Option<StopReason> {
    let beta_small = beta_next <= EPS * s.anorm;
    if s.k == 1 && beta_small {
        return Some(StopReason::EigenvectorB);
    }
    // As in the truncation rule, the newest mu_k does not count towards the
    // denominator.
    if e.rnorm / (s.anorm * s.chi_prior + beta1) <= tol {
        return Some(StopReason::SolutionToleranceMet);
    }
    if s.anorm > 0.0 && e.rnorm > EPS * beta1 && s.ls_factor / s.anorm <= tol {
        return Some(StopReason::LeastSquaresToleranceMet);
    }
    if s.chi >= maxxnorm || s.truncation == Some(Truncation::Xnorm) {
        return Some(StopReason::XnormLimit);
    }
    if s.acond >= cond_limit {
        return Some(StopReason::CondLimit);
    }
    if s.k >= itnlim {
        return Some(StopReason::IterationLimit);
    }
    if beta_small {
        return Some(StopReason::LanczosBreakdown);
    }
    if s.truncation == Some(Truncation::Singular) {
        return Some(StopReason::LastDiagZero);
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Estimates {
    rnorm: f64,
    arnorm: f64,
    xnorm: f64,
    anorm: f64,
    acond: f64,
    axnorm: f64,
}

impl Estimates {
    fn initial() -> Self {
        Self {
            rnorm: 0.0,
            arnorm: 0.0,
            xnorm: 0.0,
            anorm: 0.0,
            acond: 1.0,
            axnorm: 0.0,
        }
    }

    fn from_step(s: &StepScalars) -> Self {
        Self {
            rnorm: s.phi,
            arnorm: s.psi,
            xnorm: s.chi,
            anorm: s.anorm,
            acond: s.acond,
            axnorm: s.omega,
        }
    }
}

struct Output {
    x: Vec<f64>,
    iterations: usize,
    solution_iteration: usize,
    phase_transfer_iteration: Option<usize>,
    rank_deficient_iteration: Option<usize>,
    beta1: f64,
    estimates: Estimates,
    work_vectors: usize,
    trace: Vec<TraceRecord>,
}

impl Output {
    fn new(n: usize) -> Self {
        Self {
            x: vec![0.0; n],
            iterations: 0,
            solution_iteration: 0,
            phase_transfer_iteration: None,
            rank_deficient_iteration: None,
            beta1: 0.0,
            estimates: Estimates::initial(),
            work_vectors: 0,
            trace: Vec::new(),
        }
    }

    fn finish(self, stop: StopReason) -> SolveReport {
        let e = self.estimates;
        SolveReport {
            x: self.x,
            stop,
            iterations: self.iterations,
            solution_iteration: self.solution_iteration,
            phase_transfer_iteration: self.phase_transfer_iteration,
            rank_deficient_iteration: self.rank_deficient_iteration,
            beta1: self.beta1,
            rnorm: e.rnorm,
            arnorm: e.arnorm,
            xnorm: e.xnorm,
            anorm: e.anorm,
            acond: e.acond,
            axnorm: e.axnorm,
            work_vectors: self.work_vectors,
            trace: self.trace,
        }
    }
}

/// The two direction buffers plus the lagged QLP iterate.
///
/// MINRES phase: `a = d_{k-1}`, `b = d_k` after an update. QLP phase:
/// `a = w_{k-1}^(3)`, `b = w_k^(2)` and `xl2 = x_{k-2}^(2)`.
struct Directions {
    a: Vec<f64>,
    b: Vec<f64>,
    xl2: Vec<f64>,
}

impl Directions {
    fn new(n: usize) -> Self {
        Self {
            a: vec![0.0; n],
            b: vec![0.0; n],
            xl2: Vec::new(),
        }
    }

    /// Rebuilds `w_{k-2}`, `w_{k-1}` from `d_{k-2}`, `d_{k-1}` via `W = D L`
    /// on the last two columns of `L_{k-1}`, and the lagged iterate from `x`.
    #[allow(clippy::needless_range_loop)]
    fn transfer(&mut self, x: &[f64], t: &TransferSnapshot) {
        self.xl2 = vec![0.0; x.len()];
        for i in 0..x.len() {
            let (d2, d1) = (self.a[i], self.b[i]);
            let w2 = t.gamma_km2 * d2 + t.theta_km1 * d1;
            let w1 = t.gamma_km1 * d1;
            self.a[i] = w2;
            self.b[i] = w1;
            self.xl2[i] = x[i] - t.mu_km2 * w2 - t.mu_km1 * w1;
        }
    }

    fn minres_update(&mut self, x: &mut [f64], q: &[f64], v_scale: f64, s: &StepScalars) {
        let inv = 1.0 / s.gamma2;
        for i in 0..x.len() {
            let d = (q[i] * v_scale - s.epsilon * self.a[i] - s.delta2 * self.b[i]) * inv;
            self.a[i] = d;
            x[i] += s.tau * d;
        }
        std::mem::swap(&mut self.a, &mut self.b);
    }

    fn qlp_update(&mut self, x: &mut [f64], q: &[f64], v_scale: f64, s: &StepScalars) {
        let (c2, s2) = (s.right1.c, s.right1.s);
        let (c3, s3) = (s.right2.c, s.right2.s);
        for i in 0..x.len() {
            let v = q[i] * v_scale;
            let (wa, wb) = (self.a[i], self.b[i]);
            let wk = s2 * wa - c2 * v;
            let w_km2 = c2 * wa + s2 * v;
            let w_km1 = c3 * wb + s3 * wk;
            let wk2 = s3 * wb - c3 * wk;
            self.xl2[i] += s.mu_km2 * w_km2;
            x[i] = self.xl2[i] + s.mu_km1 * w_km1 + s.mu_k * wk2;
            self.a[i] = w_km1;
            self.b[i] = wk2;
        }
    }
}
