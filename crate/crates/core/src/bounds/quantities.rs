use crate::geometry::{deviation, PerturbationPair};
use crate::linalg::Matrix;

/// Every norm the estimators are assembled from, evaluated once per pair.
///
/// Naming: `pa`/`pb` are `||A^+||_2`/`||B^+||_2`, `na`/`nb` are
/// `||A||_2`/`||B||_2`. Products are squared Frobenius norms read left to
/// right, with `a`/`b` for the pseudoinverses, `aa`/`bb` for the column
/// projectors `AA^+`/`BB^+`, and trailing `aa`/`bb` for the row projectors
/// `A^+A`/`B^+B`. A `_perp` suffix means the product with the complementary
/// projector, e.g. `a_e_perp = ||A^+ E (I - B^+ B)||_F^2`, which equals
/// `||A^+ E||^2 - ||A^+ E B^+ B||^2` without the cancellation.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantities {
    pub rows: usize,
    pub cols: usize,
    pub r: usize,
    pub s: usize,

    pub pa: f64,
    pub pb: f64,
    pub na: f64,
    pub nb: f64,

    pub e_sq: f64,
    pub e_fro: f64,
    pub e_2: f64,

    pub exact_sq: f64,
    pub exact_fro: f64,
    pub exact_2: f64,

    /// `||B^+ E A^+||^2`
    pub b_e_a: f64,
    /// `||A^+ E B^+||^2`
    pub a_e_b: f64,

    /// `||A^+ E||^2`, `||A^+ E B^+ B||^2`, `||A^+ E (I - B^+B)||^2`
    pub a_e: f64,
    pub a_e_b_bb: f64,
    pub a_e_perp: f64,
    /// `||E B^+||^2`, `||AA^+ E B^+||^2`, `||(I - AA^+) E B^+||^2`
    pub e_b: f64,
    pub aa_e_b: f64,
    pub e_b_perp: f64,
    /// `||E A^+||^2`, `||BB^+ E A^+||^2`, `||(I - BB^+) E A^+||^2`
    pub e_a: f64,
    pub bb_e_a: f64,
    pub e_a_perp: f64,
    /// `||B^+ E||^2`, `||B^+ E A^+ A||^2`, `||B^+ E (I - A^+A)||^2`
    pub b_e: f64,
    pub b_e_a_aa: f64,
    pub b_e_perp: f64,

    /// `||E (I - B^+B)||^2`, i.e. `||E||^2 - ||E B^+ B||^2`
    pub e_row_perp_b: f64,
    /// `||(I - AA^+) E||^2`, i.e. `||E||^2 - ||AA^+ E||^2`
    pub e_col_perp_a: f64,
    /// `||(I - BB^+) E||^2`, i.e. `||E||^2 - ||BB^+ E||^2`
    pub e_col_perp_b: f64,
    /// `||E (I - A^+A)||^2`, i.e. `||E||^2 - ||E A^+ A||^2`
    pub e_row_perp_a: f64,

    /// Squared column norms of `A^+ E Vt_1`.
    pub a_e_vt1_cols: Vec<f64>,
    /// Squared row norms of `U_1* E B^+`.
    pub u1_e_b_rows: Vec<f64>,
    /// Squared row norms of `Ut_1* E A^+`.
    pub ut1_e_a_rows: Vec<f64>,
    /// Squared column norms of `B^+ E V_1`.
    pub b_e_v1_cols: Vec<f64>,

    /// Positive singular values of `A` and `B`, non-increasing.
    pub sigma_a: Vec<f64>,
    pub sigma_b: Vec<f64>,
}

impl Quantities {
    pub fn of(p: &PerturbationPair) -> Self {
        let (fa, fb) = (p.svd_a(), p.svd_b());
        let (ap, bp, e) = (p.pinv_a(), p.pinv_b(), p.e());
        let (u1, u2, v1, v2) = (fa.u1(), fa.u2(), fa.v1(), fa.v2());
        let (ut1, ut2, vt1, vt2) = (fb.u1(), fb.u2(), fb.v1(), fb.v2());

        let sq = |m: &Matrix| m.frobenius_norm_sq();
        // Projections through orthonormal frames: ||X P|| with P = W W* equals ||X W||.
        let a_e = ap * e;
        let e_b = e * bp;
        let e_a = e * ap;
        let b_e = bp * e;

        let diff = deviation(p);
        let a_e_vt1 = &a_e * &vt1;
        let u1_e_b = &u1.adjoint() * &e_b;
        let ut1_e_a = &ut1.adjoint() * &e_a;
        let b_e_v1 = &b_e * &v1;

        Self {
            rows: p.rows(),
            cols: p.cols(),
            r: p.r(),
            s: p.s(),
            pa: fa.pinv_norm2(),
            pb: fb.pinv_norm2(),
            na: fa.norm2(),
            nb: fb.norm2(),
            e_sq: sq(e),
            e_fro: e.frobenius_norm(),
            e_2: crate::linalg::spectral_norm(e).unwrap_or(f64::NAN),
            exact_sq: diff.frobenius_norm_sq(),
            exact_fro: diff.frobenius_norm(),
            exact_2: crate::linalg::spectral_norm(&diff).unwrap_or(f64::NAN),
            b_e_a: sq(&(&b_e * ap)),
            a_e_b: sq(&(&a_e * bp)),
            a_e: sq(&a_e),
            a_e_b_bb: sq(&a_e_vt1),
            a_e_perp: sq(&(&a_e * &vt2)),
            e_b: sq(&e_b),
            aa_e_b: sq(&u1_e_b),
            e_b_perp: sq(&(&u2.adjoint() * &e_b)),
            e_a: sq(&e_a),
            bb_e_a: sq(&ut1_e_a),
            e_a_perp: sq(&(&ut2.adjoint() * &e_a)),
            b_e: sq(&b_e),
            b_e_a_aa: sq(&b_e_v1),
            b_e_perp: sq(&(&b_e * &v2)),
            e_row_perp_b: sq(&(e * &vt2)),
            e_col_perp_a: sq(&(&u2.adjoint() * e)),
            e_col_perp_b: sq(&(&ut2.adjoint() * e)),
            e_row_perp_a: sq(&(e * &v2)),
            a_e_vt1_cols: col_norms_sq(&a_e_vt1),
            u1_e_b_rows: col_norms_sq(&u1_e_b.adjoint()),
            ut1_e_a_rows: col_norms_sq(&ut1_e_a.adjoint()),
            b_e_v1_cols: col_norms_sq(&b_e_v1),
            sigma_a: fa.positive().to_vec(),
            sigma_b: fb.positive().to_vec(),
        }
    }

    /// `||A^+E||^2 - c ||A^+EB^+||^2` with `c = pivot^2` for `pivot` a
    /// singular value of `B`, evaluated as `||A^+E(I - B^+B)||^2` plus
    /// weighted column norms so that no large terms cancel.
    pub fn a_e_less(&self, pivot: f64) -> f64 {
        self.a_e_perp + shifted(&self.a_e_vt1_cols, &self.sigma_b, pivot)
    }

    /// `||EB^+||^2 - c ||A^+EB^+||^2` with `c = pivot^2`, `pivot` a singular
    /// value of `A`.
    pub fn e_b_less(&self, pivot: f64) -> f64 {
        self.e_b_perp + shifted(&self.u1_e_b_rows, &self.sigma_a, pivot)
    }

    /// `||EA^+||^2 - c ||B^+EA^+||^2` with `c = pivot^2`, `pivot` a singular
    /// value of `B`.
    pub fn e_a_less(&self, pivot: f64) -> f64 {
        self.e_a_perp + shifted(&self.ut1_e_a_rows, &self.sigma_b, pivot)
    }

    /// `||B^+E||^2 - c ||B^+EA^+||^2` with `c = pivot^2`, `pivot` a singular
    /// value of `A`.
    pub fn b_e_less(&self, pivot: f64) -> f64 {
        self.b_e_perp + shifted(&self.b_e_v1_cols, &self.sigma_a, pivot)
    }

    /// Natural magnitude of the deviation, used to scale tolerances.
    pub fn scale(&self) -> f64 {
        1.0 + self.exact_sq.abs()
    }
}

fn col_norms_sq(m: &Matrix) -> Vec<f64> {
    (0..m.cols())
        .map(|j| m.column(j).iter().map(|z| z.norm_sqr()).sum())
        .collect()
}

/// `sum_i (1 - pivot^2 / sigma_i^2) w_i`.
fn shifted(w: &[f64], sigma: &[f64], pivot: f64) -> f64 {
    w.iter()
        .zip(sigma)
        .map(|(w, s)| (1.0 - (pivot / s).powi(2)) * w)
        .sum()
}
