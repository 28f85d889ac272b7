//! Singular, inconsistent system: the solver returns the minimum-length
//! least-squares solution, which we compare with a dense pseudoinverse.
//!
//! cargo run --example singular_least_squares

use minresqlp::oracle::{default_rank_tol, pseudo_solve_dense, residual_norm};
use minresqlp::{solve, DenseSymMatrix, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Path-graph Laplacian: singular, with null space spanned by ones(n).
    let n = 8;
    let mut e = vec![0.0; n * n];
    for i in 0..n {
        let deg = if i == 0 || i == n - 1 { 1.0 } else { 2.0 };
        e[i * n + i] = deg;
        if i + 1 < n {
            e[i * n + i + 1] = -1.0;
            e[(i + 1) * n + i] = -1.0;
        }
    }
    let a = DenseSymMatrix::new(n, e)?;
    // The mean of b lies in the null space, so A x = b has no solution.
    let b: Vec<f64> = (0..n).map(|i| 1.0 + (i as f64).cos()).collect();

    let report = solve(&a, &b, &SolverConfig::default(), None)?;
    let reference = pseudo_solve_dense(&a, &b, 0.0, default_rank_tol(n))?;
    let diff = report.x.iter().zip(&reference).map(|(x, r)| (x - r).powi(2)).sum::<f64>().sqrt();

    println!("stop             {} ({})", report.stop.symbol(), report.stop.meaning());
    println!("iterations       {}", report.iterations);
    println!("rnorm estimate   {:e}", report.rnorm);
    println!("rnorm true       {:e}", residual_norm(&a, &b, 0.0, &report.x));
    println!("sum(x)           {:e}", report.x.iter().sum::<f64>());
    println!("|x - pinv(A) b|  {diff:e}");
    Ok(())
}
