//! Dense complex linear algebra: the matrix type, a one-sided Jacobi SVD and
//! everything built on the pseudoinverse.

mod matrix;
mod pinv;
mod svd;

pub use matrix::{Matrix, Scalar};
pub use pinv::{
    frobenius_norm, lstsq_min_norm, penrose_residuals, pinv, pinv_of, projector_col, projector_row,
    spectral_norm, PenroseResiduals,
};
pub use svd::{singular_values, svd, ulp, SvdFactors, TolPolicy};
