//! Full singular value decomposition by one-sided (Hestenes) Jacobi.
//!
//! The working matrix `G = M V` is orthogonalised column by column with
//! complex plane rotations until every column pair satisfies
//! `|g_p* g_q| <= eps * |g_p| |g_q|`. Singular values are the final column
//! norms, which keeps small singular values accurate to high relative
//! precision. That matters here because `||M^+||_2 = 1 / sigma_rank`.

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};

const MAX_SWEEPS: usize = 100;

/// How the singular-value cutoff that defines numerical rank is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum TolPolicy {
    /// `max(m, n) * ulp(sigma_1)`.
    #[default]
    Default,
    /// A fixed absolute cutoff.
    Absolute(f64),
}

impl TolPolicy {
    pub fn resolve(self, rows: usize, cols: usize, sigma_max: f64) -> f64 {
        match self {
            TolPolicy::Default => rows.max(cols) as f64 * ulp(sigma_max),
            TolPolicy::Absolute(t) => t,
        }
    }
}

/// Spacing between `x` and the next larger double; zero for zero.
pub fn ulp(x: f64) -> f64 {
    let x = x.abs();
    if x == 0.0 || !x.is_finite() {
        return 0.0;
    }
    x.next_up() - x
}

/// `M = U diag(sigma) V*` with unitary `U` (m x m) and `V` (n x n).
///
/// `sigma` holds `min(m, n)` values in non-increasing order; the first
/// `rank` of them exceed `tol`, the rest do not.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub v: Matrix,
    pub rank: usize,
    pub tol: f64,
}

impl SvdFactors {
    pub fn rows(&self) -> usize {
        self.u.rows()
    }

    pub fn cols(&self) -> usize {
        self.v.rows()
    }

    /// Leading `rank` left singular vectors.
    pub fn u1(&self) -> Matrix {
        self.u.columns(0..self.rank)
    }

    /// Left null frame, the complement of [`Self::u1`].
    pub fn u2(&self) -> Matrix {
        self.u.columns(self.rank..self.rows())
    }

    pub fn v1(&self) -> Matrix {
        self.v.columns(0..self.rank)
    }

    pub fn v2(&self) -> Matrix {
        self.v.columns(self.rank..self.cols())
    }

    /// The positive singular values `sigma_1 >= ... >= sigma_rank`.
    pub fn positive(&self) -> &[f64] {
        &self.sigma[..self.rank]
    }

    pub fn inv_positive(&self) -> Vec<f64> {
        self.positive().iter().map(|s| 1.0 / s).collect()
    }

    /// `sigma_1`, the spectral norm of the factored matrix.
    pub fn norm2(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    /// `||M^+||_2 = 1 / sigma_rank`, zero for a rank-0 matrix.
    pub fn pinv_norm2(&self) -> f64 {
        if self.rank == 0 {
            0.0
        } else {
            1.0 / self.sigma[self.rank - 1]
        }
    }

    /// `sigma_rank / sigma_{rank+1}`, infinite when no singular value
    /// trails the numerical rank or it is exactly zero.
    pub fn rank_gap(&self) -> f64 {
        match (self.rank, self.sigma.get(self.rank)) {
            (0, _) => f64::INFINITY,
            (r, Some(&next)) if next > 0.0 => self.sigma[r - 1] / next,
            _ => f64::INFINITY,
        }
    }

    /// `U diag(sigma) V*` using all singular triplets.
    pub fn reconstruct(&self) -> Matrix {
        let k = self.sigma.len();
        let us = self.u.columns(0..k).scale_cols(&self.sigma);
        &us * &self.v.columns(0..k).adjoint()
    }
}

/// Full SVD of `m` with the rank cutoff chosen by `policy`.
pub fn svd(m: &Matrix, policy: TolPolicy) -> Result<SvdFactors> {
    if let Some(k) = m
        .as_slice()
        .iter()
        .position(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::NonFinite {
            row: k / m.cols().max(1),
            col: k % m.cols().max(1),
        });
    }
    if let TolPolicy::Absolute(t) = policy {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::Param(format!(
                "rank tolerance must be finite and non-negative, got {t}"
            )));
        }
    }

    let (rows, cols) = m.shape();
    let wide = rows < cols;
    // Work on a tall matrix; for wide input factor M* and swap the frames.
    let (u, sigma, v) = if wide {
        let (u, s, v) = jacobi_tall(&m.adjoint());
        (v, s, u)
    } else {
        jacobi_tall(m)
    };

    let tol = policy.resolve(rows, cols, sigma.first().copied().unwrap_or(0.0));
    let rank = sigma.iter().take_while(|&&s| s > tol).count();
    Ok(SvdFactors {
        u,
        sigma,
        v,
        rank,
        tol,
    })
}

/// Singular values only, in non-increasing order.
pub fn singular_values(m: &Matrix) -> Result<Vec<f64>> {
    Ok(svd(m, TolPolicy::Default)?.sigma)
}

/// One-sided Jacobi on a matrix with `rows >= cols`. Returns full `U`
/// (rows x rows), sorted singular values (cols of them) and full `V`.
fn jacobi_tall(m: &Matrix) -> (Matrix, Vec<f64>, Matrix) {
    let (rows, cols) = m.shape();
    debug_assert!(rows >= cols);
    let eps = f64::EPSILON;

    let mut g: Vec<Vec<Scalar>> = (0..cols).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<Scalar>> = (0..cols)
        .map(|j| {
            let mut e = vec![Scalar::new(0.0, 0.0); cols];
            e[j] = Scalar::new(1.0, 0.0);
            e
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha = norm_sq(&g[p]);
                let beta = norm_sq(&g[q]);
                let gamma = dot(&g[p], &g[q]);
                let gabs = gamma.norm();
                if gabs == 0.0 || gabs <= eps * alpha.sqrt() * beta.sqrt() {
                    continue;
                }
                rotated = true;

                // Real rotation on (g_p, g_q * conj(phase)) annihilating the
                // now-real inner product |gamma|.
                let zeta = (beta - alpha) / (2.0 * gabs);
                let t = zeta.signum() / (zeta.abs() + zeta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = c * t;
                let phase = (gamma / gabs).conj();

                rotate(&mut g, p, q, c, s, phase);
                rotate(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = g.iter().map(|col| norm_sq(col).sqrt()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));

    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();

    let mut u_cols: Vec<Vec<Scalar>> = order
        .iter()
        .filter(|&&j| norms[j] > 0.0)
        .map(|&j| g[j].iter().map(|z| z / norms[j]).collect())
        .collect();
    complete_orthonormal(&mut u_cols, rows);

    let u = from_columns(rows, &u_cols);
    let v_sorted: Vec<Vec<Scalar>> = order.iter().map(|&j| v[j].clone()).collect();
    let v = from_columns(cols, &v_sorted);
    (u, sigma, v)
}

fn rotate(cols: &mut [Vec<Scalar>], p: usize, q: usize, c: f64, s: f64, phase: Scalar) {
    let (head, tail) = cols.split_at_mut(q);
    let (cp, cq) = (&mut head[p], &mut tail[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let xp = *x;
        let yq = *y * phase;
        *x = xp * c - yq * s;
        *y = xp * s + yq * c;
    }
}

#[inline]
fn norm_sq(x: &[Scalar]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// `x* y`.
#[inline]
fn dot(x: &[Scalar], y: &[Scalar]) -> Scalar {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// Extends orthonormal `cols` (each of length `dim`) to a basis of the whole
/// space, greedily taking the coordinate vector with the largest residual.
fn complete_orthonormal(cols: &mut Vec<Vec<Scalar>>, dim: usize) {
    while cols.len() < dim {
        let mut best: Option<(f64, Vec<Scalar>)> = None;
        for k in 0..dim {
            let mut e = vec![Scalar::new(0.0, 0.0); dim];
            e[k] = Scalar::new(1.0, 0.0);
            // Two passes of classical Gram-Schmidt.
            for _ in 0..2 {
                for c in cols.iter() {
                    let proj = dot(c, &e);
                    for (ei, ci) in e.iter_mut().zip(c) {
                        *ei -= proj * ci;
                    }
                }
            }
            let nrm = norm_sq(&e).sqrt();
            if best.as_ref().is_none_or(|(b, _)| nrm > *b) {
                best = Some((nrm, e));
            }
        }
        let (nrm, mut e) = best.expect("dim > 0 when completing a basis");
        e.iter_mut().for_each(|z| *z /= nrm);
        cols.push(e);
    }
}

fn from_columns(rows: usize, cols: &[Vec<Scalar>]) -> Matrix {
    Matrix::from_fn(rows, cols.len(), |i, j| cols[j][i])
}
