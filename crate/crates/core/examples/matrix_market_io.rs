//! Write a matrix and right-hand side in Matrix Market format, read them
//! back, solve, and save the solution.
//!
//! cargo run --example matrix_market_io

use minresqlp::mtx_io::{read_matrix, read_vector, write_matrix, write_vector};
use minresqlp::operators::SymmetricOperator;
use minresqlp::{solve, SolverConfig, SparseSymMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("minresqlp-example");
    std::fs::create_dir_all(&dir)?;
    let (apath, bpath, xpath) = (dir.join("a.mtx"), dir.join("b.mtx"), dir.join("x.mtx"));

    let a = SparseSymMatrix::from_triplets(3, &[(0, 0, 1.0), (1, 1, 2.0), (2, 1, 0.5)])?;
    write_matrix(&apath, &a)?;
    write_vector(&bpath, &[1.0, 2.0, 3.0])?;
    println!("{}", std::fs::read_to_string(&apath)?);

    let a = read_matrix(&apath)?;
    let b = read_vector(&bpath)?;
    let report = solve(&a, &b, &SolverConfig::default(), None)?;
    write_vector(&xpath, &report.x)?;
    println!("n {} nnz {} stop {}", a.dim(), a.nnz(), report.stop.symbol());
    println!("{}", std::fs::read_to_string(&xpath)?);

    // Malformed input reports the offending line.
    let bad = minresqlp::mtx_io::parse_matrix("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 2 1.0\n");
    println!("{}", bad.unwrap_err());
    Ok(())
}
