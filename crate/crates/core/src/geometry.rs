//! Perturbation pairs and the singular-frame block quantities.
//!
//! With `A = U_1 S_1 V_1*` (rank `r`) and `B = Ut_1 St_1 Vt_1*` (rank `s`),
//! the deviation `||B^+ - A^+||_F^2` splits into Frobenius norms of the
//! products between the range frames of one matrix and the null frames of
//! the other. This module computes those blocks and checks the exact
//! identities and inequalities relating them to products of `E = B - A`
//! with the two pseudoinverses.

use crate::error::{Error, Result};
use crate::linalg::{pinv, singular_values, svd, Matrix, SvdFactors, TolPolicy};

/// `(A, B)` with `E = B - A` and cached factorisations of both matrices.
#[derive(Debug, Clone)]
pub struct PerturbationPair {
    a: Matrix,
    b: Matrix,
    e: Matrix,
    svd_a: SvdFactors,
    svd_b: SvdFactors,
    pinv_a: Matrix,
    pinv_b: Matrix,
}

impl PerturbationPair {
    pub fn new(a: Matrix, b: Matrix, policy: TolPolicy) -> Result<Self> {
        let e = b.try_sub(&a)?;
        let svd_a = svd(&a, policy)?;
        let svd_b = svd(&b, policy)?;
        let pinv_a = pinv(&svd_a);
        let pinv_b = pinv(&svd_b);
        Ok(Self {
            a,
            b,
            e,
            svd_a,
            svd_b,
            pinv_a,
            pinv_b,
        })
    }

    /// The pair with the roles of `A` and `B` interchanged (so `E` flips sign).
    pub fn swapped(&self) -> Self {
        Self {
            a: self.b.clone(),
            b: self.a.clone(),
            e: &self.a - &self.b,
            svd_a: self.svd_b.clone(),
            svd_b: self.svd_a.clone(),
            pinv_a: self.pinv_b.clone(),
            pinv_b: self.pinv_a.clone(),
        }
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn e(&self) -> &Matrix {
        &self.e
    }

    pub fn svd_a(&self) -> &SvdFactors {
        &self.svd_a
    }

    pub fn svd_b(&self) -> &SvdFactors {
        &self.svd_b
    }

    pub fn pinv_a(&self) -> &Matrix {
        &self.pinv_a
    }

    pub fn pinv_b(&self) -> &Matrix {
        &self.pinv_b
    }

    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    /// Numerical rank of `A`.
    pub fn r(&self) -> usize {
        self.svd_a.rank
    }

    /// Numerical rank of `B`.
    pub fn s(&self) -> usize {
        self.svd_b.rank
    }

    pub fn equal_rank(&self) -> bool {
        self.r() == self.s()
    }
}

/// `||B^+ - A^+||_F^2` from the literal difference of the two inverses.
pub fn deviation_sq(p: &PerturbationPair) -> f64 {
    (p.pinv_b() - p.pinv_a()).frobenius_norm_sq()
}

/// `B^+ - A^+` assembled as `-B^+ E A^+ + B^+ U_2 U_2* - Vt_2 Vt_2* A^+`.
///
/// The literal difference loses about `||A^+|| / ||B^+ - A^+||` digits when
/// `B` is close to an ill-conditioned `A`; this form works from `E` directly.
pub fn deviation(p: &PerturbationPair) -> Matrix {
    let (u2, vt2) = (p.svd_a.u2(), p.svd_b.v2());
    let cross = &(p.pinv_b() * p.e()) * p.pinv_a();
    let left = &(p.pinv_b() * &u2) * &u2.adjoint();
    let right = &vt2 * &(&vt2.adjoint() * p.pinv_a());
    &(&left - &cross) - &right
}

/// Frobenius norms of the cross-frame products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockNorms {
    /// `||Ut_1* U_2||_F`
    pub u12: f64,
    /// `||Ut_2* U_1||_F`
    pub u21: f64,
    /// `||Vt_1* V_2||_F`
    pub v12: f64,
    /// `||Vt_2* V_1||_F`
    pub v21: f64,
    /// `||St_1^{-1} Ut_1* U_2||_F`
    pub u12_weighted: f64,
    /// `||Vt_2* V_1 S_1^{-1}||_F`
    pub v21_weighted: f64,
    /// `||Ut_2* U_1 S_1^{-1}||_F`
    pub u21_weighted: f64,
    /// `||St_1^{-1} Vt_1* V_2||_F`
    pub v12_weighted: f64,
}

/// The eight frame blocks, computed once.
struct Frames {
    u1: Matrix,
    u2: Matrix,
    v1: Matrix,
    v2: Matrix,
    ut1: Matrix,
    ut2: Matrix,
    vt1: Matrix,
    vt2: Matrix,
    inv_a: Vec<f64>,
    inv_b: Vec<f64>,
}

impl Frames {
    fn of(p: &PerturbationPair) -> Self {
        Self {
            u1: p.svd_a.u1(),
            u2: p.svd_a.u2(),
            v1: p.svd_a.v1(),
            v2: p.svd_a.v2(),
            ut1: p.svd_b.u1(),
            ut2: p.svd_b.u2(),
            vt1: p.svd_b.v1(),
            vt2: p.svd_b.v2(),
            inv_a: p.svd_a.inv_positive(),
            inv_b: p.svd_b.inv_positive(),
        }
    }
}

pub fn block_norms(p: &PerturbationPair) -> BlockNorms {
    let f = Frames::of(p);
    let ut1_u2 = &f.ut1.adjoint() * &f.u2;
    let ut2_u1 = &f.ut2.adjoint() * &f.u1;
    let vt1_v2 = &f.vt1.adjoint() * &f.v2;
    let vt2_v1 = &f.vt2.adjoint() * &f.v1;
    BlockNorms {
        u12: ut1_u2.frobenius_norm(),
        u21: ut2_u1.frobenius_norm(),
        v12: vt1_v2.frobenius_norm(),
        v21: vt2_v1.frobenius_norm(),
        u12_weighted: ut1_u2.scale_rows(&f.inv_b).frobenius_norm(),
        v21_weighted: vt2_v1.scale_cols(&f.inv_a).frobenius_norm(),
        u21_weighted: ut2_u1.scale_cols(&f.inv_a).frobenius_norm(),
        v12_weighted: vt1_v2.scale_rows(&f.inv_b).frobenius_norm(),
    }
}

/// `(||St_1^{-1} Ut_1* U_2||^2, ||Vt_2* V_1 S_1^{-1}||^2, ||B^+ E A^+||^2)`;
/// the three terms sum to the squared deviation.
pub fn identity_terms_a(p: &PerturbationPair) -> [f64; 3] {
    let n = block_norms(p);
    let cross = (&(p.pinv_b() * p.e()) * p.pinv_a()).frobenius_norm_sq();
    [n.u12_weighted.powi(2), n.v21_weighted.powi(2), cross]
}

/// `(||Ut_2* U_1 S_1^{-1}||^2, ||St_1^{-1} Vt_1* V_2||^2, ||A^+ E B^+||^2)`;
/// the three terms sum to the squared deviation.
pub fn identity_terms_b(p: &PerturbationPair) -> [f64; 3] {
    let n = block_norms(p);
    let cross = (&(p.pinv_a() * p.e()) * p.pinv_b()).frobenius_norm_sq();
    [n.u21_weighted.powi(2), n.v12_weighted.powi(2), cross]
}

/// Both sides of an identity that holds in exact arithmetic, along with the
/// largest operand entering either side (the natural error scale).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentitySides {
    pub lhs: f64,
    pub rhs: f64,
    pub scale: f64,
}

impl IdentitySides {
    pub fn abs_diff(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }

    /// `|lhs - rhs| / scale`, zero when both sides and the scale vanish.
    pub fn rel_diff(&self) -> f64 {
        if self.scale == 0.0 {
            self.abs_diff()
        } else {
            self.abs_diff() / self.scale
        }
    }
}

/// `||Ut_1* U_2||_F^2 = ||E B^+||_F^2 - ||A A^+ E B^+||_F^2`.
pub fn column_gap_identity(p: &PerturbationPair) -> IdentitySides {
    let lhs = block_norms(p).u12.powi(2);
    let e_b = p.e() * p.pinv_b();
    let outer = e_b.frobenius_norm_sq();
    let inner = (&(p.a() * p.pinv_a()) * &e_b).frobenius_norm_sq();
    IdentitySides {
        lhs,
        rhs: outer - inner,
        scale: outer.max(lhs),
    }
}

/// `||Vt_2* V_1||_F^2 = ||A^+ E||_F^2 - ||A^+ E B^+ B||_F^2`.
pub fn row_gap_identity(p: &PerturbationPair) -> IdentitySides {
    let lhs = block_norms(p).v21.powi(2);
    let a_e = p.pinv_a() * p.e();
    let outer = a_e.frobenius_norm_sq();
    let inner = (&a_e * &(p.pinv_b() * p.b())).frobenius_norm_sq();
    IdentitySides {
        lhs,
        rhs: outer - inner,
        scale: outer.max(lhs),
    }
}

/// Which pair of frames rotates `E` in a three-term energy split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitFrames {
    /// `U* E Vt`: left frame of `A`, right frame of `B`.
    LeftOfA,
    /// `Ut* E V`: left frame of `B`, right frame of `A`.
    LeftOfB,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySplit {
    pub terms: [f64; 3],
    /// `||E||_F^2` computed directly.
    pub total: f64,
}

impl EnergySplit {
    pub fn sum(&self) -> f64 {
        self.terms.iter().sum()
    }
}

/// Splits `||E||_F^2` into the three non-zero blocks of a frame rotation of `E`.
///
/// `LeftOfA`: `||U_1* Ut_1 St_1 - S_1 V_1* Vt_1||^2 + ||S_1 V_1* Vt_2||^2 + ||U_2* Ut_1 St_1||^2`.
/// `LeftOfB`: `||St_1 Vt_1* V_1 - Ut_1* U_1 S_1||^2 + ||St_1 Vt_1* V_2||^2 + ||Ut_2* U_1 S_1||^2`.
pub fn energy_split(p: &PerturbationPair, frames: SplitFrames) -> EnergySplit {
    let f = Frames::of(p);
    let sa = p.svd_a().positive();
    let sb = p.svd_b().positive();
    let terms = match frames {
        SplitFrames::LeftOfA => {
            let t1 = &(&f.u1.adjoint() * &f.ut1).scale_cols(sb)
                - &(&f.v1.adjoint() * &f.vt1).scale_rows(sa);
            let t2 = (&f.v1.adjoint() * &f.vt2).scale_rows(sa);
            let t3 = (&f.u2.adjoint() * &f.ut1).scale_cols(sb);
            [
                t1.frobenius_norm_sq(),
                t2.frobenius_norm_sq(),
                t3.frobenius_norm_sq(),
            ]
        }
        SplitFrames::LeftOfB => {
            let t1 = &(&f.vt1.adjoint() * &f.v1).scale_rows(sb)
                - &(&f.ut1.adjoint() * &f.u1).scale_cols(sa);
            let t2 = (&f.vt1.adjoint() * &f.v2).scale_rows(sb);
            let t3 = (&f.ut2.adjoint() * &f.u1).scale_cols(sa);
            [
                t1.frobenius_norm_sq(),
                t2.frobenius_norm_sq(),
                t3.frobenius_norm_sq(),
            ]
        }
    };
    EnergySplit {
        terms,
        total: p.e().frobenius_norm_sq(),
    }
}

/// The four cross-frame norms together with whether the ranks agree. The
/// equalities `u12 == u21` and `v12 == v21` are only asserted when they do.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EqualRankRelations {
    pub u12: f64,
    pub u21: f64,
    pub v12: f64,
    pub v21: f64,
    pub ranks_equal: bool,
}

impl EqualRankRelations {
    /// `max(|u12 - u21|, |v12 - v21|)` when the ranks agree, `None` otherwise.
    pub fn mismatch(&self) -> Option<f64> {
        self.ranks_equal
            .then(|| (self.u12 - self.u21).abs().max((self.v12 - self.v21).abs()))
    }
}

pub fn equal_rank_relations(p: &PerturbationPair) -> EqualRankRelations {
    let n = block_norms(p);
    EqualRankRelations {
        u12: n.u12,
        u21: n.u21,
        v12: n.v12,
        v21: n.v21,
        ranks_equal: p.equal_rank(),
    }
}

fn same_shape(op: &'static str, m: &Matrix, n: &Matrix) -> Result<()> {
    if m.shape() != n.shape() {
        return Err(Error::Shape {
            op,
            left: m.shape(),
            right: n.shape(),
        });
    }
    Ok(())
}

/// `sum_i sigma_i(M) sigma_i(N)` with both spectra sorted non-increasing.
pub fn von_neumann_sum(m: &Matrix, n: &Matrix) -> Result<f64> {
    same_shape("von_neumann_sum", m, n)?;
    let sm = singular_values(m)?;
    let sn = singular_values(n)?;
    Ok(sm.iter().zip(&sn).map(|(a, b)| a * b).sum())
}

/// `Re tr(M N*)`.
pub fn trace_real(m: &Matrix, n: &Matrix) -> Result<f64> {
    same_shape("trace_real", m, n)?;
    Ok(m.as_slice()
        .iter()
        .zip(n.as_slice())
        .map(|(a, b)| (a * b.conj()).re)
        .sum())
}

/// Unitaries `(U, V)` that attain the trace maximum: with
/// `M = U_M S_M V_M*` and `N = U_N S_N V_N*`, `U = U_N U_M*` and
/// `V = V_M V_N*`, so that `U M V = U_N S_M V_N*` and
/// `Re tr(U M V N*) = sum_i sigma_i(M) sigma_i(N)`.
pub fn aligning_unitaries(m: &Matrix, n: &Matrix) -> Result<(Matrix, Matrix)> {
    same_shape("aligning_unitaries", m, n)?;
    let fm = svd(m, TolPolicy::Default)?;
    let fn_ = svd(n, TolPolicy::Default)?;
    let u = &fn_.u * &fm.u.adjoint();
    let v = &fm.v * &fn_.v.adjoint();
    Ok((u, v))
}

/// The two upper and two lower estimates obtained by bounding the weighted
/// frame blocks of the deviation identities with spectral norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleBounds {
    /// `||B^+||^2 ||Ut_1* U_2||^2 + ||A^+||^2 ||Vt_2* V_1||^2 + ||B^+ E A^+||^2`
    pub upper_a: f64,
    /// `||A^+||^2 ||Ut_2* U_1||^2 + ||B^+||^2 ||Vt_1* V_2||^2 + ||A^+ E B^+||^2`
    pub upper_b: f64,
    /// `||Ut_1* U_2||^2 / ||B||^2 + ||Vt_2* V_1||^2 / ||A||^2 + ||B^+ E A^+||^2`
    pub lower_a: f64,
    /// `||Ut_2* U_1||^2 / ||A||^2 + ||Vt_1* V_2||^2 / ||B||^2 + ||A^+ E B^+||^2`
    pub lower_b: f64,
}

/// `num / den`, taking an empty block over a zero norm as zero.
fn over(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

pub fn angle_bounds(p: &PerturbationPair) -> AngleBounds {
    let n = block_norms(p);
    let [.., x] = identity_terms_a(p);
    let [.., y] = identity_terms_b(p);
    let (pa, pb) = (
        p.svd_a().pinv_norm2().powi(2),
        p.svd_b().pinv_norm2().powi(2),
    );
    let (na, nb) = (p.svd_a().norm2().powi(2), p.svd_b().norm2().powi(2));
    AngleBounds {
        upper_a: pb * n.u12.powi(2) + pa * n.v21.powi(2) + x,
        upper_b: pa * n.u21.powi(2) + pb * n.v12.powi(2) + y,
        lower_a: over(n.u12.powi(2), nb) + over(n.v21.powi(2), na) + x,
        lower_b: over(n.u21.powi(2), na) + over(n.v12.powi(2), nb) + y,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Scalar;

    fn model_one(tau: f64) -> PerturbationPair {
        let a = Matrix::from_diag(&[1.0, 0.0]);
        let b = Matrix::from_diag(&[1.0 / (1.0 + 2.0 * tau), tau]);
        PerturbationPair::new(a, b, TolPolicy::Default).unwrap()
    }

    fn model_two(tau: f64) -> PerturbationPair {
        let a = Matrix::from_diag(&[1.0, 0.0]);
        let b = Matrix::from_diag(&[tau / (1.0 + tau), 2.0 * tau]);
        PerturbationPair::new(a, b, TolPolicy::Default).unwrap()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn model_one_ranks() {
        let p = model_one(0.2);
        assert_eq!((p.r(), p.s()), (1, 2));
    }

    #[test]
    fn identical_pair() {
        let p = PerturbationPair::new(Matrix::identity(2), Matrix::identity(2), TolPolicy::Default)
            .unwrap();
        assert_eq!((p.r(), p.s()), (2, 2));
        assert_eq!(p.e(), &Matrix::zeros(2, 2));
        assert_eq!(deviation_sq(&p), 0.0);
        assert_eq!(identity_terms_a(&p), [0.0; 3]);
        assert_eq!(identity_terms_b(&p), [0.0; 3]);
        let rel = equal_rank_relations(&p);
        assert_eq!((rel.u12, rel.u21, rel.v12, rel.v21), (0.0, 0.0, 0.0, 0.0));
        let u = column_gap_identity(&p);
        let v = row_gap_identity(&p);
        assert_eq!((u.lhs, u.rhs, v.lhs, v.rhs), (0.0, 0.0, 0.0, 0.0));
        let ab = angle_bounds(&p);
        assert_eq!([ab.upper_a, ab.upper_b, ab.lower_a, ab.lower_b], [0.0; 4]);
        assert_eq!(energy_split(&p, SplitFrames::LeftOfA).terms, [0.0; 3]);
    }

    #[test]
    fn deviation_of_model_problems() {
        let p = model_one(0.2);
        assert!(close(deviation_sq(&p), 25.16, 1e-14));
        let p = model_two(0.25);
        assert!(close(deviation_sq(&p), 20.0, 1e-14));
        assert!(close(deviation(&p).frobenius_norm_sq(), 20.0, 1e-14));
    }

    #[test]
    fn assembled_deviation_matches_literal_difference() {
        let a = Matrix::from_rows(&[
            vec![
                Scalar::new(1.0, 0.5),
                Scalar::new(2.0, 0.0),
                Scalar::new(0.0, -1.0),
            ],
            vec![
                Scalar::new(0.0, 0.0),
                Scalar::new(1.0, 1.0),
                Scalar::new(3.0, 0.0),
            ],
        ])
        .unwrap();
        for b in [
            Matrix::zeros(2, 3),
            a.scale_real(1.5),
            &a + &Matrix::from_fn(2, 3, |i, j| Scalar::new(0.1 * (i + j) as f64, 0.0)),
        ] {
            let p = PerturbationPair::new(a.clone(), b, TolPolicy::Default).unwrap();
            let literal = p.pinv_b() - p.pinv_a();
            assert!(deviation(&p).max_abs_diff(&literal) < 1e-13);
        }
    }

    #[test]
    fn model_one_identities() {
        let p = model_one(0.2);
        let dev = deviation_sq(&p);
        assert!(close(identity_terms_a(&p).iter().sum(), dev, 1e-14));
        assert!(close(identity_terms_b(&p).iter().sum(), dev, 1e-14));
        let u = column_gap_identity(&p);
        let v = row_gap_identity(&p);
        assert!(u.rel_diff() < 1e-14 && v.rel_diff() < 1e-14);
        // B's extra direction e_2 lies in A's left null space.
        assert!(close(u.lhs, 1.0, 1e-14));
        assert!(close(v.lhs, 0.0, 1e-14));
    }

    #[test]
    fn model_one_has_no_equal_rank_relations() {
        let rel = equal_rank_relations(&model_one(0.2));
        assert!(!rel.ranks_equal);
        assert_eq!(rel.mismatch(), None);
    }

    #[test]
    fn model_two_energy_splits() {
        let p = model_two(0.25);
        for frames in [SplitFrames::LeftOfA, SplitFrames::LeftOfB] {
            let split = energy_split(&p, frames);
            assert!(
                close(split.sum(), split.total, 1e-14),
                "{frames:?}: {split:?}"
            );
        }
        assert!(close(
            energy_split(&p, SplitFrames::LeftOfA).total,
            0.89,
            1e-14
        ));
    }

    #[test]
    fn von_neumann_examples() {
        let i2 = Matrix::identity(2);
        assert!(close(von_neumann_sum(&i2, &i2).unwrap(), 2.0, 1e-15));
        assert!(close(trace_real(&i2, &i2).unwrap(), 2.0, 1e-15));
        let m = Matrix::from_diag(&[3.0, 1.0]);
        let n = Matrix::from_diag(&[2.0, 5.0]);
        assert!(close(von_neumann_sum(&m, &n).unwrap(), 17.0, 1e-15));
        assert!(close(trace_real(&m, &n).unwrap(), 11.0, 1e-15));
        assert!(von_neumann_sum(&m, &Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn model_one_trace_bound() {
        // |Re tr(A^+ (B^+)*)| <= sum 1/(sigma_i sigma~_i) over min(r, s) terms.
        let p = model_one(0.2);
        let tr = trace_real(p.pinv_a(), p.pinv_b()).unwrap();
        let vn = von_neumann_sum(p.pinv_a(), p.pinv_b()).unwrap();
        let sa = p.svd_a().positive();
        let sb = p.svd_b().positive();
        let direct: f64 = sa.iter().zip(sb).map(|(x, y)| 1.0 / (x * y)).sum();
        // sigma_1(A^+) = 1, sigma_1(B^+) = 1/tau: the pseudoinverse spectra
        // pair the reciprocals in reverse, so the sum is 1/tau here.
        assert!(close(vn, 5.0, 1e-14));
        assert!(close(tr, 1.4, 1e-14));
        assert!(tr.abs() <= vn);
        assert!(tr.abs() <= direct + 1e-14);
    }

    #[test]
    fn model_one_angle_sandwich() {
        let p = model_one(0.2);
        let dev = deviation_sq(&p);
        let ab = angle_bounds(&p);
        assert!(ab.upper_a >= dev - 1e-12 && ab.upper_b >= dev - 1e-12);
        assert!(ab.lower_a <= dev + 1e-12 && ab.lower_b <= dev + 1e-12);
    }

    #[test]
    fn swapped_pair_negates_perturbation() {
        let p = model_one(0.3);
        let q = p.swapped();
        assert_eq!(q.e(), &-p.e());
        assert_eq!((q.r(), q.s()), (p.s(), p.r()));
        assert!(close(deviation_sq(&q), deviation_sq(&p), 1e-15));
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let err =
            PerturbationPair::new(Matrix::zeros(2, 2), Matrix::zeros(2, 3), TolPolicy::Default)
                .unwrap_err();
        assert!(matches!(err, Error::Shape { .. }));
    }
}
