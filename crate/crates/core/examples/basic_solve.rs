//! Solve a small symmetric indefinite system and print the report.
//!
//! cargo run --example basic_solve

use minresqlp::{solve, DenseSymMatrix, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = DenseSymMatrix::from_rows(&[
        vec![4.0, 1.0, 0.0, 0.0],
        vec![1.0, -3.0, 2.0, 0.0],
        vec![0.0, 2.0, 1.0, -1.0],
        vec![0.0, 0.0, -1.0, 5.0],
    ])?;
    let b = [1.0, 2.0, 3.0, 4.0];

    let report = solve(&a, &b, &SolverConfig::default().with_rtol(1e-12), None)?;
    println!("stop        {} ({})", report.stop.symbol(), report.stop.meaning());
    println!("iterations  {}", report.iterations);
    println!("x           {:?}", report.x);
    println!("rnorm       {:e}", report.rnorm);
    println!("Acond       {:e}", report.acond);
    Ok(())
}
