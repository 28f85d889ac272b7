//! Record the per-iteration trace and print it as CSV, e.g. to plot the
//! residual against the solution norm.
//!
//! cargo run --example trace_csv > trace.csv

use minresqlp::{solve, SolverConfig, SparseSymMatrix, TraceRecord};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 50;
    let mut t = Vec::new();
    for i in 0..n {
        t.push((i, i, 2.0));
        if i > 0 {
            t.push((i, i - 1, -1.0));
        }
    }
    let a = SparseSymMatrix::from_triplets(n, &t)?;
    let b: Vec<f64> = (0..n).map(|i| ((i * 7) % 11) as f64 - 5.0).collect();
    let config = SolverConfig::default().with_sigma(0.5).with_trace(true);
    let report = solve(&a, &b, &config, None)?;

    println!("{}", TraceRecord::CSV_HEADER);
    for rec in &report.trace {
        println!("{}", rec.csv_row());
    }
    eprintln!("{} rows, stop {}", report.trace.len(), report.stop.symbol());
    Ok(())
}
