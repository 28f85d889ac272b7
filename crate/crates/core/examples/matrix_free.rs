//! Use a closure as the operator: a 2-D Laplacian on a grid, never stored.
//!
//! cargo run --example matrix_free

use minresqlp::{solve, FnOperator, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = 30;
    let n = m * m;
    let lap = FnOperator::new(n, move |x: &[f64], y: &mut [f64]| {
        for i in 0..m {
            for j in 0..m {
                let k = i * m + j;
                let mut v = 4.0 * x[k];
                if i > 0 {
                    v -= x[k - m];
                }
                if i + 1 < m {
                    v -= x[k + m];
                }
                if j > 0 {
                    v -= x[k - 1];
                }
                if j + 1 < m {
                    v -= x[k + 1];
                }
                y[k] = v;
            }
        }
    });
    // Shifting by 2 makes the problem indefinite.
    let config = SolverConfig::default().with_sigma(2.0).with_rtol(1e-10).with_checks(true, false);
    let b = vec![1.0; n];
    let report = solve(&lap, &b, &config, None)?;
    println!("n = {n}, stop {}, {} iterations, rnorm {:e}", report.stop.symbol(), report.iterations, report.rnorm);
    Ok(())
}
