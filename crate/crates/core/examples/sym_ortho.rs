//! The stable 2x2 reflector used by every rotation in the solver.
//!
//! cargo run --example sym_ortho

use minresqlp::sym_ortho;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (a, b) in [(3.0, 4.0), (0.0, -2.0), (-5.0, 0.0), (1e300, 1e300), (1e-310, 3e-310)] {
        let r = sym_ortho(a, b)?;
        // [c s; s -c] [a; b] = [r; 0]
        let zero = r.s * a - r.c * b;
        println!("a {a:>9.1e} b {b:>9.1e}  c {:>8.5} s {:>8.5} r {:>9.3e}  residual {zero:.1e}", r.c, r.s, r.r);
    }
    Ok(())
}
