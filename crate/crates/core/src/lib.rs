//! Rigorous lower bounds on the smallest singular value of a nonsingular
//! square matrix.
//!
//! Five bounds are computed from `|det A|`, `‖A‖_F` and `det(λI − AᴴA)`: the
//! classical Yu–Gu bound `l`, Zou's refinement `l0`, the Lin–Xie root `a`,
//! the closed form `l1` and the fixed-point limit `b`. A Jacobi-based oracle
//! computes `σ_min` itself so every ordering can be checked at runtime.
//!
//! ```
//! use sigmin::{compute_all, Matrix, SolverConfig};
//!
//! let a = Matrix::from_real_rows(&[[3.0, 2.0, 0.0], [1.0, 9.0, 5.0], [0.0, 5.0, 7.0]]).unwrap();
//! let report = compute_all(&a, &SolverConfig::default(), true).unwrap();
//! assert!(report.l1 < report.b && report.b <= report.sigma_min.unwrap());
//! assert!(report.ordering_ok);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod checks;
pub mod ensemble;
pub mod error;
pub mod io;
pub mod matrix;
pub mod oracle;
mod scalar;

pub use bounds::{
    bound_b_iterate, bound_l1, bound_lin_xie, bound_yu_gu, bound_zou, compute_all, fixed_point_f, BoundsReport,
    FixedPointMap, IterationTrace, LinXieEquation, SolverConfig,
};
pub use checks::{invariant_checks, ordering_checks, Check};
pub use ensemble::{generate, generate_trial, EnsembleSpec, Family};
pub use error::{Error, Result};
pub use io::{parse_csv, parse_matrix_market, to_csv, to_matrix_market};
pub use matrix::{GramMatrix, LogScaledScalar, Matrix};
pub use oracle::{charpoly_eigen_bruteforce, jacobi_eigenvalues, sigma_min_exact, singular_spectrum, Spectrum};
