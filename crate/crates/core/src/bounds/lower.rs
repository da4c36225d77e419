//! Lower estimates for `||B^+ - A^+||_F^2`, the larger of two mirrored
//! branches in each case. They divide by `||A||_2` and `||B||_2`, so both
//! matrices must be nonzero.

use super::{BoundKind, BoundValue, Quantities};

const NONZERO: &str = "requires A and B nonzero";

fn nonzero(q: &Quantities) -> bool {
    q.r > 0 && q.s > 0
}

pub fn subspace_lower(q: &Quantities) -> BoundValue {
    let b = BoundValue::squared("subspace_lower", BoundKind::Lower);
    if !nonzero(q) {
        return b.not_applicable(NONZERO);
    }
    let (na2, nb2) = (q.na.powi(2), q.nb.powi(2));
    let a1 = q.a_e_perp / na2 + q.e_b_perp / nb2 + q.b_e_a;
    let a2 = q.e_a_perp / na2 + q.b_e_perp / nb2 + q.a_e_b;
    b.with_value(a1.max(a2))
}

pub fn residual_lower(q: &Quantities) -> BoundValue {
    let b = BoundValue::squared("residual_lower", BoundKind::Lower);
    if !nonzero(q) {
        return b.not_applicable(NONZERO);
    }
    let (na4, nb4) = (q.na.powi(4), q.nb.powi(4));
    let b1 = q.e_row_perp_b / na4 + q.e_col_perp_a / nb4 + q.b_e_a;
    let b2 = q.e_col_perp_b / na4 + q.e_row_perp_a / nb4 + q.a_e_b;
    b.with_value(b1.max(b2))
}

pub fn cross_term_lower(q: &Quantities) -> BoundValue {
    let b = BoundValue::squared("cross_term_lower", BoundKind::Lower);
    if !nonzero(q) {
        return b.not_applicable(NONZERO);
    }
    let (na2, nb2) = (q.na.powi(2), q.nb.powi(2));
    let (x, y) = (q.b_e_a, q.a_e_b);
    let (s1, st1) = (q.sigma_a[0], q.sigma_b[0]);
    // a_e_less(st1) = ||A^+E||^2 - ||B||^2 ||A^+EB^+||^2, and so on.
    let g1 = q.a_e_less(st1) / na2 + q.e_b_less(s1) / nb2 + x;
    let g2 = q.e_a_less(st1) / na2 + q.b_e_less(s1) / nb2 + y;
    b.with_value(g1.max(g2))
}

pub fn energy_lower(q: &Quantities) -> BoundValue {
    let b = BoundValue::squared("energy_lower", BoundKind::Lower);
    if !nonzero(q) {
        return b.not_applicable(NONZERO);
    }
    let (na2, nb2) = (q.na.powi(2), q.nb.powi(2));
    let m4 = na2.max(nb2).powi(2);
    let d1 = (q.e_sq - (nb2 * q.aa_e_b).min(na2 * q.a_e_b_bb)) / m4 + q.b_e_a;
    let d2 = (q.e_sq - (na2 * q.bb_e_a).min(nb2 * q.b_e_a_aa)) / m4 + q.a_e_b;
    b.with_value(d1.max(d2))
}

pub fn energy_equal_rank_lower(q: &Quantities) -> BoundValue {
    let b = BoundValue::squared("energy_equal_rank_lower", BoundKind::Lower);
    if !nonzero(q) {
        return b.not_applicable(NONZERO);
    }
    if q.r != q.s {
        return b.not_applicable("requires s = r");
    }
    let (na2, nb2) = (q.na.powi(2), q.nb.powi(2));
    let w = na2 * nb2;
    let e1 = (q.e_sq - (na2 * q.bb_e_a).min(nb2 * q.b_e_a_aa)) / w + q.b_e_a;
    let e2 = (q.e_sq - (nb2 * q.aa_e_b).min(na2 * q.a_e_b_bb)) / w + q.a_e_b;
    b.with_value(e1.max(e2))
}
