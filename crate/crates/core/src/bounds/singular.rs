//! Estimates that depend only on the two spectra.

use super::{BoundKind, BoundValue, Quantities};

/// Reciprocals of the positive singular values, largest first.
fn inverse_spectrum(sigma: &[f64]) -> Vec<f64> {
    let mut inv: Vec<f64> = sigma.iter().map(|s| 1.0 / s).collect();
    inv.sort_by(|a, b| b.total_cmp(a));
    inv
}

/// `(lower, upper)` from the singular values of `A^+` and `B^+` paired in
/// the same order. The common part contributes `(a_i -/+ b_i)^2` and the
/// unpaired tail of the longer spectrum contributes its squares to both.
pub fn singular_value_pair(sigma_a: &[f64], sigma_b: &[f64]) -> (f64, f64) {
    let ia = inverse_spectrum(sigma_a);
    let ib = inverse_spectrum(sigma_b);
    let k = ia.len().min(ib.len());
    let tail: f64 = ia[k..].iter().chain(&ib[k..]).map(|x| x * x).sum();
    let (mut lo, mut hi) = (tail, tail);
    for (a, b) in ia.iter().zip(&ib) {
        lo += (a - b).powi(2);
        hi += (a + b).powi(2);
    }
    (lo, hi)
}

pub fn singular_value_bounds(q: &Quantities) -> (BoundValue, BoundValue) {
    let (lo, hi) = singular_value_pair(&q.sigma_a, &q.sigma_b);
    (
        BoundValue::squared("singular_value_lower", BoundKind::Lower).with_value(lo),
        BoundValue::squared("singular_value_upper", BoundKind::Upper).with_value(hi),
    )
}
