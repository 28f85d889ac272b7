//! Command-line driver.
//!
//! Exit codes: 0 for converged or degenerate exits (classes C2 and C4), 2 for
//! regularization limits (C3), 3 for Lanczos/factorization exits including
//! the iteration limit (C1), 4 for erroneous inputs (C5), 1 for usage, I/O
//! and parse errors.

use crate::mtx_io::{self, MtxMatrix};
use crate::operators::{apply, JacobiPreconditioner, Preconditioner, SymmetricOperator};
use crate::solver::{solve, SolveReport, SolverConfig, StopClass, StopReason, TraceRecord};
use clap::{Parser, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

/// Diagonal entries below this fraction of the largest are raised to it.
pub const JACOBI_REL_FLOOR: f64 = 1e-8;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_REGULARIZATION: i32 = 2;
pub const EXIT_LANCZOS: i32 = 3;
pub const EXIT_BAD_INPUT: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PrecondKind {
    None,
    Jacobi,
}

/// Solve a symmetric system or least-squares problem read from Matrix
/// Market files.
#[derive(Debug, Clone, Parser)]
#[command(name = "minresqlp", version)]
pub struct CliOptions {
    /// Symmetric matrix A (Matrix Market).
    #[arg(long)]
    pub matrix: PathBuf,
    /// Right-hand side b (array n x 1). Defaults to A * ones(n).
    #[arg(long)]
    pub rhs: Option<PathBuf>,
    /// Use a standard normal b drawn from --seed instead of A * ones(n).
    #[arg(long, conflicts_with = "rhs")]
    pub random_rhs: bool,
    /// Shift sigma: solve (A - sigma I) x = b.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub shift: f64,
    #[arg(long, default_value_t = f64::EPSILON)]
    pub rtol: f64,
    /// Iteration limit (default 4n).
    #[arg(long)]
    pub itnlim: Option<usize>,
    #[arg(long, default_value_t = 1e7)]
    pub maxxnorm: f64,
    #[arg(long, default_value_t = 1e15)]
    pub acondlim: f64,
    #[arg(long, default_value_t = 1e7)]
    pub trancond: f64,
    #[arg(long, value_enum, default_value_t = PrecondKind::None)]
    pub precond: PrecondKind,
    /// Write the per-iteration trace as CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Write x as a Matrix Market array.
    #[arg(long)]
    pub solution_out: Option<PathBuf>,
    /// Seed for --random-rhs and the symmetry probes.
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Probe A for symmetry before iterating.
    #[arg(long)]
    pub check_operator: bool,
    /// Probe M for symmetry before iterating.
    #[arg(long)]
    pub check_precond: bool,
}

impl CliOptions {
    pub fn solver_config(&self) -> SolverConfig {
        let mut config = SolverConfig::default()
            .with_sigma(self.shift)
            .with_rtol(self.rtol)
            .with_maxxnorm(self.maxxnorm)
            .with_acondlim(self.acondlim)
            .with_trancond(self.trancond)
            .with_checks(self.check_operator, self.check_precond);
        config.itnlim = self.itnlim;
        config.trace = self.trace.is_some();
        config.check_seed = self.seed;
        config
    }
}

pub fn exit_code(stop: StopReason) -> i32 {
    match stop.class() {
        StopClass::C2 | StopClass::C4 => EXIT_OK,
        StopClass::C3 => EXIT_REGULARIZATION,
        StopClass::C1 => EXIT_LANCZOS,
        StopClass::C5 => EXIT_BAD_INPUT,
    }
}

/// The report block printed after a solve.
pub fn format_report(n: usize, nnz: usize, report: &SolveReport) -> String {
    let mut s = String::new();
    let transfer = report
        .phase_transfer_iteration
        .map_or_else(|| "none".to_string(), |k| k.to_string());
    let _ = writeln!(s, "n            {n}");
    let _ = writeln!(s, "nnz          {nnz}");
    let _ = writeln!(s, "iterations   {}", report.iterations);
    let _ = writeln!(s, "transfer     {transfer}");
    let _ = writeln!(s, "stop         {} ({})", report.stop.symbol(), report.stop.meaning());
    let _ = writeln!(s, "rnorm        {:e}", report.rnorm);
    let _ = writeln!(s, "Arnorm       {:e}", report.arnorm);
    let _ = writeln!(s, "xnorm        {:e}", report.xnorm);
    let _ = writeln!(s, "Anorm        {:e}", report.anorm);
    let _ = writeln!(s, "Acond        {:e}", report.acond);
    let _ = writeln!(s, "Axnorm       {:e}", report.axnorm);
    s
}

pub fn format_trace(trace: &[TraceRecord]) -> String {
    let mut s = String::from(TraceRecord::CSV_HEADER);
    s.push('\n');
    for rec in trace {
        s.push_str(&rec.csv_row());
        s.push('\n');
    }
    s
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

/// Runs the driver, writing the report to `out` and diagnostics to `err`.
pub fn run(opts: &CliOptions, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match run_inner(opts, out) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {}", msg.replace('\n', " "));
            EXIT_USAGE
        }
    }
}

fn run_inner(opts: &CliOptions, out: &mut dyn Write) -> Result<i32, Failure> {
    let a: MtxMatrix = mtx_io::read_matrix(&opts.matrix)?;
    let n = a.dim();
    let b = match (&opts.rhs, opts.random_rhs) {
        (Some(path), _) => {
            let b = mtx_io::read_vector(path)?;
            if b.len() != n {
                return Err(Failure(format!(
                    "{}: rhs has {} entries but the matrix is {n} x {n}",
                    path.display(),
                    b.len()
                )));
            }
            b
        }
        (None, true) => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
        }
        (None, false) => apply(&a, &vec![1.0; n])?,
    };
    let jacobi = match opts.precond {
        PrecondKind::None => None,
        PrecondKind::Jacobi => Some(JacobiPreconditioner::from_matrix_relative(&a, JACOBI_REL_FLOOR)?),
    };
    let precond = jacobi.as_ref().map(|m| m as &dyn Preconditioner);
    let report = solve(&a, &b, &opts.solver_config(), precond)?;

    out.write_all(format_report(n, a.nnz(), &report).as_bytes())?;
    if let Some(path) = &opts.solution_out {
        mtx_io::write_vector(path, &report.x)?;
    }
    if let Some(path) = &opts.trace {
        std::fs::write(path, format_trace(&report.trace)).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    }
    Ok(exit_code(report.stop))
}

/// Parses `args` and runs; clap usage errors map to exit code 1.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match CliOptions::try_parse_from(args) {
        Ok(opts) => run(&opts, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            if e.use_stderr() {
                let _ = write!(err, "{e}");
            } else {
                let _ = write!(out, "{e}");
            }
            code
        }
    }
}
