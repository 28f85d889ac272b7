use std::fmt;

/// Which update rule produced the iterate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Minres,
    Qlp,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Minres => "MINRES",
            Phase::Qlp => "QLP",
        })
    }
}

/// The five families of stopping conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopClass {
    /// Lanczos and the QLP factorization: iteration limit, Lanczos
    /// breakdown, zero last diagonal.
    C1,
    /// Normwise relative backward errors.
    C2,
    /// Regularization limits on the condition and solution norm estimates.
    C3,
    /// Degenerate right-hand sides.
    C4,
    /// Erroneous inputs.
    C5,
}

/// Why a solve ended. Exactly one per solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    BetaZeroBIsZero,
    EigenvectorB,
    LanczosBreakdown,
    LastDiagZero,
    SolutionToleranceMet,
    LeastSquaresToleranceMet,
    CondLimit,
    XnormLimit,
    IterationLimit,
    OperatorNotSymmetric,
    PrecondNotSymmetric,
    PrecondNotPositiveDefinite,
}

impl StopReason {
    pub const ALL: [StopReason; 12] = [
        StopReason::BetaZeroBIsZero,
        StopReason::EigenvectorB,
        StopReason::LanczosBreakdown,
        StopReason::LastDiagZero,
        StopReason::SolutionToleranceMet,
        StopReason::LeastSquaresToleranceMet,
        StopReason::CondLimit,
        StopReason::XnormLimit,
        StopReason::IterationLimit,
        StopReason::OperatorNotSymmetric,
        StopReason::PrecondNotSymmetric,
        StopReason::PrecondNotPositiveDefinite,
    ];

    pub fn class(self) -> StopClass {
        use StopReason::*;
        match self {
            IterationLimit | LanczosBreakdown | LastDiagZero => StopClass::C1,
            SolutionToleranceMet | LeastSquaresToleranceMet => StopClass::C2,
            CondLimit | XnormLimit => StopClass::C3,
            BetaZeroBIsZero | EigenvectorB => StopClass::C4,
            OperatorNotSymmetric | PrecondNotSymmetric | PrecondNotPositiveDefinite => StopClass::C5,
        }
    }

    pub fn symbol(self) -> &'static str {
        use StopReason::*;
        match self {
            BetaZeroBIsZero => "BetaZeroBIsZero",
            EigenvectorB => "EigenvectorB",
            LanczosBreakdown => "LanczosBreakdown",
            LastDiagZero => "LastDiagZero",
            SolutionToleranceMet => "SolutionToleranceMet",
            LeastSquaresToleranceMet => "LeastSquaresToleranceMet",
            CondLimit => "CondLimit",
            XnormLimit => "XnormLimit",
            IterationLimit => "IterationLimit",
            OperatorNotSymmetric => "OperatorNotSymmetric",
            PrecondNotSymmetric => "PrecondNotSymmetric",
            PrecondNotPositiveDefinite => "PrecondNotPositiveDefinite",
        }
    }

    pub fn meaning(self) -> &'static str {
        use StopReason::*;
        match self {
            BetaZeroBIsZero => "b = 0, so x = 0 is the solution",
            EigenvectorB => "b is an eigenvector of A - sigma I; x = b / alpha_1",
            LanczosBreakdown => "Lanczos produced a negligible beta_{k+1}",
            LastDiagZero => "the last diagonal of L_k is negligible",
            SolutionToleranceMet => "x solves (A - sigma I) x = b to within rtol (NRBE)",
            LeastSquaresToleranceMet => "x is a least-squares solution to within rtol (NRBE)",
            CondLimit => "the condition estimate reached min(Acondlim, 0.1/eps)",
            XnormLimit => "the solution norm estimate reached maxxnorm",
            IterationLimit => "the iteration limit was reached",
            OperatorNotSymmetric => "A failed the symmetry probe",
            PrecondNotSymmetric => "M failed the symmetry probe",
            PrecondNotPositiveDefinite => "M is not positive definite (q'z < 0)",
        }
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Outcome of a solve.
///
/// With a preconditioner, `x` solves the original system while every norm
/// estimate refers to `M^{-1/2} (A - sigma I) M^{-1/2}`: `rnorm` estimates
/// `||b - (A - sigma I) x||_{M^{-1}}`, `xnorm` estimates `||M^{1/2} x||`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub x: Vec<f64>,
    pub stop: StopReason,
    /// Lanczos steps taken, equal to the number of operator products outside
    /// the optional symmetry probe.
    pub iterations: usize,
    /// Index of the iterate returned in `x`. This is `iterations - 1` when a
    /// regularization limit (class C3) hands back the last iterate within
    /// limits, and `iterations` otherwise.
    pub solution_iteration: usize,
    pub phase_transfer_iteration: Option<usize>,
    /// Iteration at which the last column of `L_k` was dropped (`mu_k = 0`).
    pub rank_deficient_iteration: Option<usize>,
    pub beta1: f64,
    pub rnorm: f64,
    /// Lags one iteration behind `rnorm`: it estimates `||A r_{k-1}||`.
    pub arnorm: f64,
    pub xnorm: f64,
    pub anorm: f64,
    pub acond: f64,
    pub axnorm: f64,
    /// Persistent length-`n` buffers allocated by the iteration (excluding
    /// `x` and the symmetry probes).
    pub work_vectors: usize,
    pub trace: Vec<TraceRecord>,
}

/// Per-iteration diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub k: usize,
    pub phase: Phase,
    /// `phi_k` before any truncation adjustment, so the column is monotone
    /// even on the final step; the report carries the adjusted value.
    pub rnorm: f64,
    /// `psi_{k-1}`
    pub arnorm: f64,
    pub xnorm: f64,
    /// `chi_{k-2}^{(2)}`, the lagged and monotone solution-norm estimate.
    pub xl2norm: f64,
    pub anorm: f64,
    pub acond: f64,
    pub axnorm: f64,
    pub gamma_min: f64,
    /// `rnorm / (anorm * xnorm + beta1)`
    pub nrbe: f64,
}

impl TraceRecord {
    pub const CSV_HEADER: &'static str = "k,phase,rnorm,Arnorm,xnorm,Anorm,Acond,Axnorm,gamma_min,nrbe";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
            self.k,
            self.phase,
            self.rnorm,
            self.arnorm,
            self.xnorm,
            self.anorm,
            self.acond,
            self.axnorm,
            self.gamma_min,
            self.nrbe
        )
    }
}
