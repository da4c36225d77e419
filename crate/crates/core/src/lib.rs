//! Moore-Penrose inverses computed from a one-sided Jacobi SVD, together with
//! the family of upper and lower estimates for `||B^+ - A^+||_F^2` and the
//! machinery to verify them.
//!
//! Layout:
//!
//! * [`linalg`]: dense complex matrices, SVD, pseudoinverse, projectors and
//!   minimum-norm least squares.
//! * [`geometry`]: perturbation pairs and the block quantities built from
//!   their singular frames, plus the identities those blocks satisfy.
//! * [`bounds`]: every perturbation estimator and the aggregated report.
//! * [`harness`]: seeded random ensembles, property suites and the
//!   parameter sweeps over the two diagonal model problems.
//! * [`io`]: the plain-text matrix format.

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod io;
pub mod linalg;

pub use error::{Error, Result};
pub use linalg::{Matrix, Scalar, SvdFactors, TolPolicy};
