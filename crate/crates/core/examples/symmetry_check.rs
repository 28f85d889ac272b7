//! Probe operators for symmetry, standalone and inside the solver.
//!
//! cargo run --example symmetry_check

use minresqlp::operators::{check_symmetry, default_symmetry_tol, SymmetryCheck};
use minresqlp::{solve, FnOperator, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let upper = FnOperator::new(3, |x: &[f64], y: &mut [f64]| {
        y[0] = x[0] + x[1];
        y[1] = x[1] + x[2];
        y[2] = x[2];
    });
    match check_symmetry(&upper, 2, default_symmetry_tol(), 1)? {
        SymmetryCheck::Pass => println!("passed"),
        SymmetryCheck::Fail(w) => println!("asymmetric: |x'Ay - y'Ax| = {:.3e} > {:.3e}", w.discrepancy, w.threshold),
    }

    // With the probe enabled the solver refuses before iterating.
    let config = SolverConfig::default().with_checks(true, false);
    let report = solve(&upper, &[1.0, 1.0, 1.0], &config, None)?;
    println!("solver: {} ({}) after {} iterations", report.stop.symbol(), report.stop.meaning(), report.iterations);
    Ok(())
}
