use crate::error::{Error, Result};
use crate::linalg::svd::{svd, SvdFactors, TolPolicy};
use crate::linalg::{Matrix, Scalar};

/// `V_1 Sigma_1^{-1} U_1*` from the leading `rank` singular triplets.
///
/// A rank-0 factorisation yields the `n x m` zero matrix.
pub fn pinv(f: &SvdFactors) -> Matrix {
    let v1 = f.v1().scale_cols(&f.inv_positive());
    &v1 * &f.u1().adjoint()
}

/// Factor `m` and return `(factors, m^+)`.
pub fn pinv_of(m: &Matrix, policy: TolPolicy) -> Result<(SvdFactors, Matrix)> {
    let f = svd(m, policy)?;
    let x = pinv(&f);
    Ok((f, x))
}

pub fn spectral_norm(m: &Matrix) -> Result<f64> {
    Ok(svd(m, TolPolicy::Default)?.norm2())
}

pub fn frobenius_norm(m: &Matrix) -> f64 {
    m.frobenius_norm()
}

/// `P_M = M M^+`, the orthogonal projector onto the column space of `m`.
pub fn projector_col(m: &Matrix, policy: TolPolicy) -> Result<Matrix> {
    let (_, x) = pinv_of(m, policy)?;
    Ok(m * &x)
}

/// `P_{M*} = M^+ M`, the orthogonal projector onto the row space of `m`.
pub fn projector_row(m: &Matrix, policy: TolPolicy) -> Result<Matrix> {
    let (_, x) = pinv_of(m, policy)?;
    Ok(&x * m)
}

/// Minimum 2-norm minimiser of `||a x - b||_2`, i.e. `a^+ b`.
pub fn lstsq_min_norm(a: &Matrix, b: &[Scalar], policy: TolPolicy) -> Result<Vec<Scalar>> {
    if b.len() != a.rows() {
        return Err(Error::Shape {
            op: "lstsq_min_norm",
            left: a.shape(),
            right: (b.len(), 1),
        });
    }
    let (_, x) = pinv_of(a, policy)?;
    Ok((&x * &Matrix::column_vector(b)).column(0))
}

/// Largest entrywise residual of the four Penrose conditions for a
/// candidate inverse `x` of `m`:
/// `m x m = m`, `x m x = x`, `(m x)* = m x`, `(x m)* = x m`.
#[derive(Debug, Clone, Copy)]
pub struct PenroseResiduals {
    pub mxm: f64,
    pub xmx: f64,
    pub mx_hermitian: f64,
    pub xm_hermitian: f64,
}

impl PenroseResiduals {
    pub fn max(&self) -> f64 {
        self.mxm
            .max(self.xmx)
            .max(self.mx_hermitian)
            .max(self.xm_hermitian)
    }
}

pub fn penrose_residuals(m: &Matrix, x: &Matrix) -> PenroseResiduals {
    let mx = m * x;
    let xm = x * m;
    PenroseResiduals {
        mxm: (&mx * m).max_abs_diff(m),
        xmx: (&xm * x).max_abs_diff(x),
        mx_hermitian: mx.adjoint().max_abs_diff(&mx),
        xm_hermitian: xm.adjoint().max_abs_diff(&xm),
    }
}
