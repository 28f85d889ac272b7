//! Acceptance criteria. Each test prints one verdict line; run with
//! `--nocapture` to see them.

mod common;

use common::*;
use minresqlp::cli;
use minresqlp::operators::{apply, check_symmetry, default_symmetry_tol, SymmetricOperator};
use minresqlp::oracle::{default_rank_tol, pseudo_solve_dense};
use minresqlp::{
    solve, sym_ortho, DenseSymMatrix, FnOperator, FnPreconditioner, JacobiPreconditioner, Preconditioner, SolveReport,
    SolverConfig, StopClass, StopReason,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::Command;
use std::time::Instant;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn oracle(a: &DenseSymMatrix, b: &[f64]) -> Vec<f64> {
    let tol = 1e3 * default_rank_tol(a.dim());
    pseudo_solve_dense(a, b, 0.0, tol).unwrap()
}

const LS_RTOL: f64 = 1e-8;

#[test]
fn criterion_01_min_length_solution() {
    let mut r = rng(1);
    let config = SolverConfig::default().with_rtol(LS_RTOL);
    let start = Instant::now();
    let (mut worst_err, mut worst_excess, mut failures) = (0.0_f64, f64::NEG_INFINITY, 0);
    for trial in 0..100 {
        let n = r.random_range(10..=50);
        let deficit = r.random_range(1..=5);
        let fx = if trial % 2 == 0 {
            exact_singular(n, deficit, 1e2, &mut r)
        } else {
            dense_singular(n, deficit, 1e2, &mut r)
        };
        let b = if trial % 4 < 2 {
            fx.consistent_rhs(&mut r)
        } else {
            fx.inconsistent_rhs(&mut r)
        };
        let report = solve(&fx.a, &b, &config, None).unwrap();
        let xd = oracle(&fx.a, &b);
        let err = rel_err(&report.x, &xd);
        let excess = norm(&report.x) / norm(&xd) - 1.0;
        worst_err = worst_err.max(err);
        worst_excess = worst_excess.max(excess);
        if !(err <= 1e-6 && excess <= 1e-8) {
            failures += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = failures == 0 && secs < 10.0;
    assert!(verdict(
        1,
        "min-length optimality",
        pass,
        &format!("100 problems, worst rel err {worst_err:.2e}, worst norm excess {worst_excess:.2e}, {secs:.2} s, failures {failures}")
    ));
}

#[test]
fn criterion_02_consistency_detection() {
    let mut r = rng(2);
    let config = SolverConfig::default().with_rtol(LS_RTOL);
    let mut bad = Vec::new();
    let (mut worst_c, mut worst_i) = (0.0_f64, 0.0_f64);
    for trial in 0..100 {
        let n = r.random_range(10..=50);
        let deficit = r.random_range(1..=5);
        let fx = if trial % 3 == 0 {
            dense_singular(n, deficit, 1e2, &mut r)
        } else {
            exact_singular(n, deficit, 1e2, &mut r)
        };
        let consistent = trial < 50;
        let b = if consistent {
            fx.consistent_rhs(&mut r)
        } else {
            fx.inconsistent_rhs(&mut r)
        };
        let rep = solve(&fx.a, &b, &config, None).unwrap();
        if consistent {
            let ratio = rep.rnorm / (rep.anorm * rep.xnorm + rep.beta1);
            worst_c = worst_c.max(ratio);
            if !(ratio <= 1e-8 && rep.stop == StopReason::SolutionToleranceMet) {
                bad.push((trial, rep.stop, ratio));
            }
        } else {
            let ratio = rep.arnorm / (rep.anorm * rep.rnorm);
            worst_i = worst_i.max(ratio);
            if !(ratio <= 1e-8 && rep.stop == StopReason::LeastSquaresToleranceMet) {
                bad.push((trial, rep.stop, ratio));
            }
        }
    }
    assert!(
        verdict(
            2,
            "consistency detection",
            bad.is_empty(),
            &format!("50+50 fixtures, worst phi/(A chi + beta1) {worst_c:.2e}, worst psi/(A phi) {worst_i:.2e}, failures {}", bad.len())
        ),
        "{bad:?}"
    );
}

/// A mix of runs: singular and nonsingular, shifted, preconditioned,
/// stopped by each family of limits.
fn assorted_runs() -> Vec<SolveReport> {
    let mut r = rng(3);
    let mut out = Vec::new();
    for trial in 0..60 {
        let n = r.random_range(5..=40);
        let traced = SolverConfig::default().with_trace(true);
        let (a, config) = match trial % 6 {
            0 => (exact_singular(n, 1 + trial % 3, 1e3, &mut r).a, traced.clone().with_rtol(LS_RTOL)),
            1 => (dense_singular(n, 2, 1e2, &mut r).a, traced.clone()),
            2 => (nonsingular(n, 1e6, true, &mut r), traced.clone().with_trancond(1.0)),
            3 => (nonsingular(n, 1e4, false, &mut r), traced.clone().with_sigma(0.5)),
            4 => (nonsingular(n, 1e10, true, &mut r), traced.clone().with_acondlim(1e6)),
            _ => (nonsingular(n, 1e3, true, &mut r), traced.clone().with_maxxnorm(0.5)),
        };
        let b = gaussian_vec(n, &mut r);
        out.push(solve(&a, &b, &config, None).unwrap());
        let scaled = badly_scaled(&a, 1e2, &mut r);
        let m = JacobiPreconditioner::from_matrix_relative(&scaled, 1e-8).unwrap();
        out.push(solve(&scaled, &b, &config, Some(&m)).unwrap());
    }
    out
}

#[test]
fn criterion_03_monotone_estimators() {
    let runs = assorted_runs();
    let mut total = Violations::default();
    let mut iterations = 0;
    for rep in &runs {
        assert_eq!(rep.trace.len(), rep.iterations);
        iterations += rep.trace.len();
        let v = monotonicity_violations(&rep.trace);
        total.rnorm += v.rnorm;
        total.xl2norm += v.xl2norm;
        total.axnorm += v.axnorm;
        total.anorm += v.anorm;
        total.acond += v.acond;
    }
    assert!(verdict(
        3,
        "monotone estimators",
        total.total() == 0,
        &format!("{} runs, {iterations} iterations, violations {total:?}", runs.len())
    ));
}

fn m_inv_residual(a: &DenseSymMatrix, b: &[f64], x: &[f64], sigma: f64, m: Option<&dyn Preconditioner>) -> f64 {
    let ax = apply(a, x).unwrap();
    let res: Vec<f64> = (0..b.len()).map(|i| b[i] - (ax[i] - sigma * x[i])).collect();
    match m {
        None => norm(&res),
        Some(m) => {
            let mut q = vec![0.0; res.len()];
            m.solve_into(&res, &mut q);
            dot(&res, &q).max(0.0).sqrt()
        }
    }
}

#[test]
fn criterion_04_estimate_fidelity() {
    let mut r = rng(4);
    let (mut runs, mut jacobi_runs, mut worst, mut failures) = (0, 0, 0.0_f64, 0);
    for trial in 0..80 {
        let n = r.random_range(10..=50);
        let cond = [1e2, 1e4, 1e6, 1e8][trial % 4];
        let (a, sigma, rtol) = match trial % 5 {
            0 => (exact_singular(n, 2, cond, &mut r).a, 0.0, LS_RTOL),
            1 => (nonsingular(n, cond, false, &mut r), 0.0, f64::EPSILON),
            2 => (nonsingular(n, cond, true, &mut r), 0.0, 1e-10),
            3 => (nonsingular(n, cond, true, &mut r), 0.25, f64::EPSILON),
            _ => (dense_singular(n, 1, cond, &mut r).a, 0.0, LS_RTOL),
        };
        let b = gaussian_vec(n, &mut r);
        let config = SolverConfig::default().with_rtol(rtol).with_sigma(sigma);
        let scaled = badly_scaled(&a, 10.0, &mut r);
        let jacobi = JacobiPreconditioner::from_matrix_relative(&scaled, 1e-8).unwrap();
        let cases: [(&DenseSymMatrix, Option<&dyn Preconditioner>); 2] = [(&a, None), (&scaled, Some(&jacobi))];
        for (mat, m) in cases {
            let config = if m.is_some() { config.clone().with_sigma(0.0) } else { config.clone() };
            let rep = solve(mat, &b, &config, m).unwrap();
            if rep.acond > 1e8 {
                continue;
            }
            runs += 1;
            jacobi_runs += usize::from(m.is_some());
            let truth = m_inv_residual(mat, &b, &rep.x, config.sigma, m);
            let gap = (rep.rnorm - truth).abs() / (rep.anorm * rep.xnorm + rep.beta1);
            worst = worst.max(gap);
            if gap > 1e-8 {
                failures += 1;
            }
        }
    }
    assert!(runs >= 100, "only {runs} runs had kappa <= 1e8");
    assert!(verdict(
        4,
        "estimate fidelity",
        failures == 0,
        &format!("{runs} runs ({jacobi_runs} Jacobi), worst |phi - ||r||| / (A chi + beta1) {worst:.2e}, failures {failures}")
    ));
}

#[test]
fn criterion_05_cost_accounting() {
    let mut r = rng(5);
    let (mut runs, mut failures, mut max_work) = (0, 0, 0);
    for trial in 0..40 {
        let n = r.random_range(5..=40);
        let a = if trial % 2 == 0 {
            nonsingular(n, 1e5, true, &mut r)
        } else {
            dense_singular(n, 2, 1e2, &mut r).a
        };
        let scaled = badly_scaled(&a, 10.0, &mut r);
        let jac = JacobiPreconditioner::from_matrix_relative(&scaled, 1e-8).unwrap();
        let b = gaussian_vec(n, &mut r);
        for (trancond, with_m) in [(1e7, false), (1.0, false), (1e7, true), (1.0, true)] {
            let op = CountingOperator::new(&scaled);
            let m = CountingPreconditioner::new(&jac);
            let config = SolverConfig::default().with_trancond(trancond).with_rtol(LS_RTOL);
            let rep = if with_m {
                solve(&op, &b, &config, Some(&m)).unwrap()
            } else {
                solve(&op, &b, &config, None).unwrap()
            };
            runs += 1;
            max_work = max_work.max(rep.work_vectors);
            let ok = op.applies.get() == rep.iterations
                && m.solves.get() <= rep.iterations + 1
                && (with_m || m.solves.get() == 0)
                && rep.work_vectors <= 8;
            failures += usize::from(!ok);
        }
    }
    assert!(verdict(
        5,
        "cost accounting",
        failures == 0,
        &format!("{runs} runs, applies == iterations, solves <= iterations + 1, max work vectors {max_work}, failures {failures}")
    ));
}

#[test]
fn criterion_06_phase_equivalence() {
    let mut r = rng(6);
    let (mut worst, mut failures) = (0.0_f64, 0);
    for trial in 0..20 {
        let n = r.random_range(10..=50);
        let a = nonsingular(n, 1e2, trial % 2 == 0, &mut r);
        let b = gaussian_vec(n, &mut r);
        let base = SolverConfig::default().with_rtol(1e-12);
        let qlp = solve(&a, &b, &base.clone().with_trancond(1.0), None).unwrap();
        let minres = solve(&a, &b, &base.with_trancond(1e7), None).unwrap();
        let err = rel_err(&qlp.x, &minres.x);
        worst = worst.max(err);
        let ok = err <= 1e-10
            && qlp.iterations == minres.iterations
            && qlp.phase_transfer_iteration == Some(1)
            && minres.phase_transfer_iteration.is_none();
        failures += usize::from(!ok);
    }
    assert!(verdict(
        6,
        "phase equivalence",
        failures == 0,
        &format!("20 problems, worst rel diff {worst:.2e}, failures {failures}")
    ));
}

#[test]
fn criterion_07_degenerate_exits() {
    let mut r = rng(7);
    let mut failures = Vec::new();
    for trial in 0..20 {
        let n = r.random_range(3..=30);
        let a = nonsingular(n, 1e3, true, &mut r);
        let zero = solve(&a, &vec![0.0; n], &SolverConfig::default(), None).unwrap();
        if !(zero.stop == StopReason::BetaZeroBIsZero && zero.iterations == 0 && zero.x.iter().all(|&v| v == 0.0)) {
            failures.push(format!("zero rhs trial {trial}: {:?}", zero.stop));
        }

        // b = c e_p with row and column p of A zero off the diagonal, so b is
        // an eigenvector in floating point as well.
        let lambda = 10f64.powf(r.random_range(-2.0..2.0)) * if trial % 3 == 0 { -1.0 } else { 1.0 };
        let rest = exact_singular(n, 1, 1e3, &mut r);
        let p = rest.null[0].iter().position(|&v| v == 1.0).unwrap();
        let mut e = rest.a.entries().to_vec();
        e[p * n + p] = lambda;
        let a = DenseSymMatrix::new(n, e).unwrap();
        let scale = 10f64.powf(r.random_range(-3.0..3.0));
        let sigma = if trial % 2 == 0 { 0.0 } else { lambda - 2.0 * lambda.abs() };
        let mut b = vec![0.0; n];
        b[p] = scale;
        let ab = apply(&a, &b).unwrap();
        let alpha1 = (dot(&b, &ab) - sigma * dot(&b, &b)) / dot(&b, &b);
        let rep = solve(&a, &b, &SolverConfig::default().with_sigma(sigma), None).unwrap();
        let expect: Vec<f64> = b.iter().map(|v| v / alpha1).collect();
        let err = rel_err(&rep.x, &expect);
        if !(rep.iterations <= 2 && err <= 1e-12 && rep.stop.class() == StopClass::C4) {
            failures.push(format!("eigen trial {trial}: {:?} in {} its, err {err:.2e}", rep.stop, rep.iterations));
        }
    }
    // Exact diagonal case with a nonzero shift.
    let d = minresqlp::DiagonalOperator::new(vec![3.0, 5.0, 3.0]).unwrap();
    let rep = solve(&d, &[1.0, 0.0, -2.0], &SolverConfig::default().with_sigma(1.0), None).unwrap();
    if !(rep.stop == StopReason::EigenvectorB && rel_err(&rep.x, &[0.5, 0.0, -1.0]) <= 1e-12) {
        failures.push(format!("diag eigen: {:?} {:?}", rep.stop, rep.x));
    }
    assert!(
        verdict(7, "degenerate exits", failures.is_empty(), &format!("41 cases, failures {}", failures.len())),
        "{failures:?}"
    );
}

fn ulps_close(x: f64, y: f64, scale: f64, ulps: f64) -> bool {
    (x - y).abs() <= ulps * f64::EPSILON * scale
}

#[test]
fn criterion_08_sym_ortho_robustness() {
    let mut r = rng(8);
    let mut branches = [0usize; 4];
    let mut failures = 0usize;
    let mut first_failure = None;
    let draw = |r: &mut ChaCha8Rng| -> f64 {
        if r.random_range(0..20) == 0 {
            return 0.0;
        }
        let mag = 10f64.powf(r.random_range(-150.0..150.0));
        if r.random::<bool>() {
            mag
        } else {
            -mag
        }
    };
    let sign = |x: f64| if x < 0.0 { -1.0 } else { 1.0 };
    for _ in 0..1_000_000 {
        let (a, b) = (draw(&mut r), draw(&mut r));
        let rot = sym_ortho(a, b).unwrap();
        // Branch-exact reference.
        let (branch, expect) = if b == 0.0 {
            (0, (if a == 0.0 { 1.0 } else { sign(a) }, 0.0, a.abs()))
        } else if a == 0.0 {
            (1, (0.0, sign(b), b.abs()))
        } else if b.abs() >= a.abs() {
            let tau = a / b;
            let s = sign(b) / (1.0 + tau * tau).sqrt();
            let c = s * tau;
            (2, (c, s, b / s))
        } else {
            let tau = b / a;
            let c = sign(a) / (1.0 + tau * tau).sqrt();
            let s = c * tau;
            (3, (c, s, a / c))
        };
        branches[branch] += 1;
        let scale = a.abs().max(b.abs());
        let h = a.hypot(b);
        let ok = (rot.c, rot.s, rot.r) == expect
            && ulps_close(rot.c * rot.c + rot.s * rot.s, 1.0, 1.0, 4.0)
            && rot.r >= 0.0
            && ulps_close(rot.r, h, h, 4.0)
            && ulps_close(rot.c * a + rot.s * b, rot.r, scale, 4.0)
            && ulps_close(rot.s * a - rot.c * b, 0.0, scale, 4.0)
            && (h == 0.0 || rot.r > 0.0)
            && ulps_close(sym_ortho(b, a).unwrap().r, rot.r, rot.r, 2.0);
        if !ok {
            failures += 1;
            first_failure.get_or_insert((a, b, rot));
        }
    }
    let pass = failures == 0 && branches.iter().all(|&c| c > 0);
    assert!(
        verdict(
            8,
            "SymOrtho robustness",
            pass,
            &format!("1e6 pairs, branch hits {branches:?}, failures {failures}")
        ),
        "{first_failure:?}"
    );
}

#[test]
fn criterion_09_input_guards() {
    let n = 6;
    let a = nonsingular(n, 10.0, true, &mut rng(9));
    let mut failures = Vec::new();
    let indefinite = FnPreconditioner::new(n, |z: &[f64], q: &mut [f64]| {
        for (i, (qi, zi)) in q.iter_mut().zip(z).enumerate() {
            *qi = if i % 2 == 0 { *zi } else { -*zi };
        }
    });
    // b' M^{-1} b < 0: exposed by the first preconditioner solve.
    let mut r = rng(90);
    let mut exposed = 0;
    while exposed < 40 {
        let b = gaussian_vec(n, &mut r);
        let signed: f64 = b.iter().enumerate().map(|(i, v)| if i % 2 == 0 { v * v } else { -v * v }).sum();
        if signed >= 0.0 {
            continue;
        }
        exposed += 1;
        let op = CountingOperator::new(&a);
        let m = CountingPreconditioner::new(&indefinite);
        let rep = solve(&op, &b, &SolverConfig::default(), Some(&m)).unwrap();
        if !(rep.stop == StopReason::PrecondNotPositiveDefinite
            && rep.iterations == 0
            && op.applies.get() == 0
            && m.solves.get() == 1)
        {
            failures.push(format!("indefinite M, b'M^-1 b < 0: {:?} after {}", rep.stop, rep.iterations));
        }
    }
    // b = ones: b' M^{-1} b = 0 although b != 0.
    let rep = solve(&a, &[1.0; 6], &SolverConfig::default(), Some(&indefinite)).unwrap();
    if !(rep.stop == StopReason::PrecondNotPositiveDefinite && rep.iterations == 0) {
        failures.push(format!("indefinite M, b = ones: {:?} after {}", rep.stop, rep.iterations));
    }
    // b = e_1: the first step passes, and the negative direction is
    // reached after one operator product.
    let mut e1 = vec![0.0; n];
    e1[0] = 1.0;
    let rep = solve(&a, &e1, &SolverConfig::default(), Some(&indefinite)).unwrap();
    if rep.stop != StopReason::PrecondNotPositiveDefinite {
        failures.push(format!("indefinite M, b = e1: {:?} after {}", rep.stop, rep.iterations));
    }
    let skew = |x: &[f64], y: &mut [f64]| {
        for i in 0..x.len() {
            y[i] = x[i] + 0.5 * x[(i + 1) % x.len()];
        }
    };
    let asym = FnOperator::new(n, skew);
    assert!(!check_symmetry(&asym, 2, default_symmetry_tol(), 1).unwrap().passed());
    let op = CountingOperator::new(&asym);
    let config = SolverConfig::default().with_checks(true, false);
    let rep = solve(&op, &[1.0; 6], &config, None).unwrap();
    if !(rep.stop == StopReason::OperatorNotSymmetric && rep.iterations == 0 && rep.x.iter().all(|&v| v == 0.0)) {
        failures.push(format!("asymmetric operator: {:?} after {}", rep.stop, rep.iterations));
    }
    assert!(
        verdict(9, "input guards", failures.is_empty(), &format!("43 cases, failures {}", failures.len())),
        "{failures:?}"
    );
}

struct CliRun {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run_cli(args: &[&str]) -> CliRun {
    let out = Command::new(env!("CARGO_BIN_EXE_minresqlp")).args(args).output().unwrap();
    CliRun {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn report_field<'a>(stdout: &'a str, key: &str) -> &'a str {
    stdout
        .lines()
        .find_map(|l| l.strip_prefix(key).filter(|rest| rest.starts_with(' ')).map(str::trim))
        .unwrap_or_else(|| panic!("no {key} in {stdout}"))
}

#[test]
fn criterion_10_cli_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    std::fs::write(
        path("diag3.mtx"),
        "%%MatrixMarket matrix coordinate real symmetric\n3 3 2\n1 1 1.0\n2 2 2.0\n",
    )
    .unwrap();
    minresqlp::mtx_io::write_vector(path("b_consistent.mtx"), &[1.0, 2.0, 0.0]).unwrap();
    minresqlp::mtx_io::write_vector(path("b_inconsistent.mtx"), &[1.0, 2.0, 3.0]).unwrap();
    let (matrix, bc, bi, trace, xout) = (
        path("diag3.mtx"),
        path("b_consistent.mtx"),
        path("b_inconsistent.mtx"),
        path("trace.csv"),
        path("x.mtx"),
    );
    let mut failures = Vec::new();

    let run = run_cli(&["--matrix", &matrix, "--rhs", &bc, "--rtol", "1e-10"]);
    if !(run.code == 0 && report_field(&run.stdout, "stop").starts_with("SolutionToleranceMet")) {
        failures.push(format!("consistent: {} {}", run.code, run.stdout));
    }

    let run = run_cli(&["--matrix", &matrix, "--rhs", &bi, "--trace", &trace, "--solution-out", &xout]);
    let rnorm: f64 = report_field(&run.stdout, "rnorm").parse().unwrap();
    if !(run.code == 0
        && report_field(&run.stdout, "stop").starts_with("LeastSquaresToleranceMet")
        && (rnorm - 3.0).abs() <= 1e-10)
    {
        failures.push(format!("inconsistent: {} {}", run.code, run.stdout));
    }
    // Report fields match the library's report exactly.
    let a = minresqlp::mtx_io::read_matrix(&matrix).unwrap();
    let lib = solve(&a, &[1.0, 2.0, 3.0], &SolverConfig::default().with_trace(true), None).unwrap();
    if run.stdout != cli::format_report(3, 2, &lib) {
        failures.push(format!("report drift:\n{}\nvs\n{}", run.stdout, cli::format_report(3, 2, &lib)));
    }
    let x = minresqlp::mtx_io::read_vector(&xout).unwrap();
    if x != lib.x {
        failures.push(format!("solution file {x:?} vs {:?}", lib.x));
    }
    for key in ["n", "nnz", "iterations", "transfer", "stop", "rnorm", "Arnorm", "xnorm", "Anorm", "Acond", "Axnorm"] {
        report_field(&run.stdout, key);
    }

    // Trace CSV parsed back re-verifies the monotone estimators.
    let text = std::fs::read_to_string(&trace).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    if header != "k,phase,rnorm,Arnorm,xnorm,Anorm,Acond,Axnorm,gamma_min,nrbe" {
        failures.push(format!("header {header}"));
    }
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    let col = |i: usize| -> Vec<f64> { rows.iter().map(|r| r[i].parse().unwrap()).collect() };
    let ks: Vec<usize> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    let increasing = |v: &[f64]| v.windows(2).all(|w| w[1] >= w[0] - MONOTONE_SLACK * w[0].abs().max(w[1].abs()));
    let rn: Vec<f64> = col(2).iter().map(|v| -v).collect();
    let trace_ok = !rows.is_empty()
        && ks.windows(2).all(|w| w[1] > w[0])
        && ks.len() == lib.iterations
        && increasing(&rn)
        && increasing(&col(5))
        && increasing(&col(6))
        && increasing(&col(7))
        && rows.iter().all(|r| r.len() == 10 && (r[1] == "MINRES" || r[1] == "QLP"));
    if !trace_ok {
        failures.push(format!("trace:\n{text}"));
    }

    // Exit codes for the other stop classes.
    let run = run_cli(&["--matrix", &matrix, "--rhs", &bi, "--maxxnorm", "1.2"]);
    if !(run.code == 2 && report_field(&run.stdout, "stop").starts_with("XnormLimit")) {
        failures.push(format!("xnorm limit: {} {}", run.code, run.stdout));
    }
    let run = run_cli(&["--matrix", &matrix, "--rhs", &bi, "--itnlim", "1"]);
    if !(run.code == 3 && report_field(&run.stdout, "stop").starts_with("IterationLimit")) {
        failures.push(format!("iteration limit: {} {}", run.code, run.stdout));
    }
    if cli::exit_code(StopReason::PrecondNotPositiveDefinite) != 4 || cli::exit_code(StopReason::OperatorNotSymmetric) != 4 {
        failures.push("C5 exit code".into());
    }
    let missing = path("missing.mtx");
    let run = run_cli(&["--matrix", &missing]);
    if !(run.code == 1 && run.stderr.contains(&missing) && run.stderr.trim().lines().count() == 1) {
        failures.push(format!("missing file: {} {}", run.code, run.stderr));
    }
    let run = run_cli(&["--matrix", &matrix, "--rtol", "abc"]);
    if run.code != 1 {
        failures.push(format!("bad flag: {}", run.code));
    }
    assert!(
        verdict(10, "CLI end to end", failures.is_empty(), &format!("8 invocations, failures {}", failures.len())),
        "{failures:#?}"
    );
}
