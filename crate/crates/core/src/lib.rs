//! Matrix-free MINRES-QLP for symmetric, possibly singular or indefinite,
//! linear systems and least-squares problems.
//!
//! ```
//! use minresqlp::{solve, DiagonalOperator, SolverConfig, StopReason};
//!
//! let a = DiagonalOperator::new(vec![1.0, 2.0, 0.0]).unwrap();
//! let report = solve(&a, &[1.0, 2.0, 3.0], &SolverConfig::default(), None).unwrap();
//! assert_eq!(report.stop, StopReason::LeastSquaresToleranceMet);
//! assert!((report.x[0] - 1.0).abs() < 1e-12 && report.x[2].abs() < 1e-12);
//! ```

// `!(x <= t)` is used on purpose so that NaN fails the test.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod lanczos;
pub mod mtx_io;
pub mod operators;
pub mod oracle;
pub mod rotations;
pub mod solver;

pub use operators::{
    DenseSymMatrix, DiagonalOperator, FnOperator, FnPreconditioner, IdentityOperator, JacobiPreconditioner,
    OperatorError, Preconditioner, SparseSymMatrix, SymmetricOperator,
};
pub use rotations::{sym_ortho, Rotation};
pub use solver::{solve, solve_with_observer, Phase, SolveError, SolveReport, SolverConfig, StopClass, StopReason, TraceRecord};
