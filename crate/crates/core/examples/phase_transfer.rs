//! Watch the switch from the MINRES phase to the QLP phase with an observer.
//! A low `trancond` forces the transfer early.
//!
//! cargo run --example phase_transfer

use minresqlp::{solve_with_observer, DiagonalOperator, Phase, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d: Vec<f64> = (0..40).map(|i| 10f64.powf(-(i as f64) / 4.0)).collect();
    let a = DiagonalOperator::new(d)?;
    let b = vec![1.0; 40];

    for trancond in [1e7, 1e2, 1.0] {
        let config = SolverConfig::default().with_trancond(trancond).with_rtol(1e-12);
        let mut phases = Vec::new();
        let report = solve_with_observer(&a, &b, &config, None, |rec| phases.push(rec.phase))?;
        let qlp = phases.iter().filter(|p| **p == Phase::Qlp).count();
        let at = report.phase_transfer_iteration.map_or("none".into(), |k| k.to_string());
        println!(
            "trancond {trancond:>7.0e}: transfer at {at:>4}, {qlp:>2} of {} iterations in QLP, Acond {:.2e}",
            report.iterations, report.acond
        );
    }
    Ok(())
}
