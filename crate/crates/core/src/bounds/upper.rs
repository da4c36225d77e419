//! Upper estimates for `||B^+ - A^+||_F^2` built from `E` and both
//! pseudoinverses. Each one is the smaller of two branches: a branch in the
//! frames of `A` paired with `||B^+EA^+||^2` and its mirror image paired with
//! `||A^+EB^+||^2`.

use super::{BoundKind, BoundValue, Quantities};

const NONZERO: &str = "requires A and B nonzero";

fn nonzero(q: &Quantities) -> bool {
    q.r > 0 && q.s > 0
}

/// Both branches of the subspace estimate, before adding the cross terms.
pub fn subspace_branches(q: &Quantities) -> (f64, f64) {
    let (pa2, pb2) = (q.pa.powi(2), q.pb.powi(2));
    (
        pa2 * q.a_e_perp + pb2 * q.e_b_perp,
        pa2 * q.e_a_perp + pb2 * q.b_e_perp,
    )
}

/// `min(alpha_1 + ||B^+EA^+||^2, alpha_2 + ||A^+EB^+||^2)` with
/// `alpha_1 = pa^2 ||A^+E(I - B^+B)||^2 + pb^2 ||(I - AA^+)EB^+||^2` and
/// `alpha_2 = pa^2 ||(I - BB^+)EA^+||^2 + pb^2 ||B^+E(I - A^+A)||^2`.
pub fn subspace_upper(q: &Quantities) -> BoundValue {
    let (a1, a2) = subspace_branches(q);
    BoundValue::squared("subspace_upper", BoundKind::Upper)
        .with_value((a1 + q.b_e_a).min(a2 + q.a_e_b))
}

/// The subspace estimate with every subspace gap replaced by a residual of
/// `E`, weighted by `pa^4` and `pb^4`.
pub fn residual_upper(q: &Quantities) -> BoundValue {
    let (pa4, pb4) = (q.pa.powi(4), q.pb.powi(4));
    let b1 = pa4 * q.e_row_perp_b + pb4 * q.e_col_perp_a;
    let b2 = pa4 * q.e_col_perp_b + pb4 * q.e_row_perp_a;
    BoundValue::squared("residual_upper", BoundKind::Upper)
        .with_value((b1 + q.b_e_a).min(b2 + q.a_e_b))
}

/// The subspace estimate with the projected products bounded below by the
/// cross terms: `alpha_i` with `||A^+EB^+B||^2` replaced by
/// `||A^+EB^+||^2 / pb^2` and `||AA^+EB^+||^2` by `||A^+EB^+||^2 / pa^2`
/// (mirrored in the second branch).
pub fn cross_term_upper(q: &Quantities) -> BoundValue {
    let b = BoundValue::squared("cross_term_upper", BoundKind::Upper);
    if !nonzero(q) {
        return b.not_applicable(NONZERO);
    }
    let (pa2, pb2) = (q.pa.powi(2), q.pb.powi(2));
    let (x, y) = (q.b_e_a, q.a_e_b);
    let (sr, ss) = (q.sigma_a[q.r - 1], q.sigma_b[q.s - 1]);
    let g1 = pa2 * q.a_e_less(ss) + pb2 * q.e_b_less(sr);
    let g2 = pa2 * q.e_a_less(ss) + pb2 * q.b_e_less(sr);
    b.with_value((g1 + x).min(g2 + y))
}

/// `(delta_1, delta_2)`, the energy branches without cross terms.
pub fn energy_branches(q: &Quantities) -> (f64, f64) {
    let (pa2, pb2) = (q.pa.powi(2), q.pb.powi(2));
    let m4 = pa2.max(pb2).powi(2);
    let d1 = m4 * (q.e_sq - (q.aa_e_b / pb2).max(q.a_e_b_bb / pa2));
    let d2 = m4 * (q.e_sq - (q.bb_e_a / pa2).max(q.b_e_a_aa / pb2));
    (d1, d2)
}

/// `min(delta_1 + ||B^+EA^+||^2, delta_2 + ||A^+EB^+||^2)` with
/// `delta_1 = max(pa^4, pb^4)(||E||^2 - max(||AA^+EB^+||^2 / pb^2, ||A^+EB^+B||^2 / pa^2))`
/// and `delta_2` its mirror image.
pub fn energy_upper(q: &Quantities) -> BoundValue {
    let b = BoundValue::squared("energy_upper", BoundKind::Upper);
    if !nonzero(q) {
        return b.not_applicable(NONZERO);
    }
    let (d1, d2) = energy_branches(q);
    b.with_value((d1 + q.b_e_a).min(d2 + q.a_e_b))
}

/// The energy estimate for `s = r`, with `pa^2 pb^2` in place of
/// `max(pa^4, pb^4)` and the branches swapped.
pub fn energy_equal_rank_upper(q: &Quantities) -> BoundValue {
    let b = BoundValue::squared("energy_equal_rank_upper", BoundKind::Upper);
    if !nonzero(q) {
        return b.not_applicable(NONZERO);
    }
    if q.r != q.s {
        return b.not_applicable("requires s = r");
    }
    let (pa2, pb2) = (q.pa.powi(2), q.pb.powi(2));
    let w = pa2 * pb2;
    let e1 = w * (q.e_sq - (q.bb_e_a / pa2).max(q.b_e_a_aa / pb2));
    let e2 = w * (q.e_sq - (q.aa_e_b / pb2).max(q.a_e_b_bb / pa2));
    b.with_value((e1 + q.b_e_a).min(e2 + q.a_e_b))
}

/// The mean of both energy branches, `(delta_1 + delta_2 + x + y) / 2`.
pub fn energy_averaged_upper(q: &Quantities) -> BoundValue {
    let b = BoundValue::squared("energy_averaged_upper", BoundKind::Upper);
    if !nonzero(q) {
        return b.not_applicable(NONZERO);
    }
    let (d1, d2) = energy_branches(q);
    b.with_value(0.5 * (d1 + d2 + q.b_e_a + q.a_e_b))
}
