use super::SolveError;

/// Tolerances and limits for a solve.
///
/// The solver works on `A - sigma I` throughout. `itnlim = None` means
/// `4 n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub sigma: f64,
    pub rtol: f64,
    pub itnlim: Option<usize>,
    pub maxxnorm: f64,
    pub acondlim: f64,
    /// Condition-estimate threshold for moving from the MINRES phase to the
    /// QLP phase. `1` runs QLP from the start; anything above `1/eps`
    /// keeps the MINRES phase unless the last diagonal collapses.
    pub trancond: f64,
    pub check_operator: bool,
    pub check_preconditioner: bool,
    /// Collect one [`TraceRecord`](super::TraceRecord) per iteration into
    /// the report.
    pub trace: bool,
    /// Seed for the symmetry probes.
    pub check_seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            sigma: 0.0,
            rtol: f64::EPSILON,
            itnlim: None,
            maxxnorm: 1e7,
            acondlim: 1e15,
            trancond: 1e7,
            check_operator: false,
            check_preconditioner: false,
            trace: false,
            check_seed: 0x5eed,
        }
    }
}

impl SolverConfig {
    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_rtol(mut self, rtol: f64) -> Self {
        self.rtol = rtol;
        self
    }

    pub fn with_itnlim(mut self, itnlim: usize) -> Self {
        self.itnlim = Some(itnlim);
        self
    }

    pub fn with_maxxnorm(mut self, maxxnorm: f64) -> Self {
        self.maxxnorm = maxxnorm;
        self
    }

    pub fn with_acondlim(mut self, acondlim: f64) -> Self {
        self.acondlim = acondlim;
        self
    }

    pub fn with_trancond(mut self, trancond: f64) -> Self {
        self.trancond = trancond;
        self
    }

    pub fn with_checks(mut self, operator: bool, preconditioner: bool) -> Self {
        self.check_operator = operator;
        self.check_preconditioner = preconditioner;
        self
    }

    pub fn with_trace(mut self, trace: bool) -> Self {
        self.trace = trace;
        self
    }

    /// Iteration limit for a problem of dimension `n`.
    pub fn iteration_limit(&self, n: usize) -> usize {
        self.itnlim.unwrap_or(4 * n).max(1)
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        let bad = |msg: String| Err(SolveError::InvalidConfig(msg));
        if !self.sigma.is_finite() {
            return bad(format!("sigma must be finite, got {}", self.sigma));
        }
        if !(self.rtol >= 0.0) {
            return bad(format!("rtol must be >= 0, got {}", self.rtol));
        }
        if self.itnlim == Some(0) {
            return bad("itnlim must be >= 1".into());
        }
        if !(self.maxxnorm > 0.0) {
            return bad(format!("maxxnorm must be > 0, got {}", self.maxxnorm));
        }
        if !(self.acondlim > 1.0) {
            return bad(format!("Acondlim must be > 1, got {}", self.acondlim));
        }
        if !(self.trancond >= 1.0) {
            return bad(format!("trancond must be >= 1, got {}", self.trancond));
        }
        Ok(())
    }
}
