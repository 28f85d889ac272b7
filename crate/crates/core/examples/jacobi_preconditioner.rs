//! Diagonal (Jacobi) preconditioning of a badly scaled sparse matrix.
//!
//! cargo run --example jacobi_preconditioner

use minresqlp::{solve, JacobiPreconditioner, Preconditioner, SolverConfig, SparseSymMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 200;
    let mut t = Vec::new();
    for i in 0..n {
        // Diagonal grows over four decades; off-diagonals stay small.
        t.push((i, i, 10f64.powf(4.0 * i as f64 / n as f64)));
        if i > 0 {
            t.push((i, i - 1, 0.3));
        }
    }
    let a = SparseSymMatrix::from_triplets(n, &t)?;
    let b = vec![1.0; n];
    let config = SolverConfig::default().with_rtol(1e-10);

    let plain = solve(&a, &b, &config, None)?;
    // M must be positive definite, so floor the diagonal at 1e-8 of its max.
    let m = JacobiPreconditioner::from_matrix_relative(&a, 1e-8)?;
    let pre = solve(&a, &b, &config, Some(&m as &dyn Preconditioner))?;

    println!("{:<14}{:>6}  stop", "", "iters");
    println!("{:<14}{:>6}  {}", "none", plain.iterations, plain.stop.symbol());
    println!("{:<14}{:>6}  {}", "jacobi", pre.iterations, pre.stop.symbol());
    Ok(())
}
