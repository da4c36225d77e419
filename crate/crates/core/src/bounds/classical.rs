//! Estimates from the earlier literature: Wedin's general and equal-rank
//! bounds, the Meng-Zheng Frobenius bounds and the three Li et al. bounds.

use super::{BoundKind, BoundValue, NormKind, Quantities, Target};

/// Golden ratio, Wedin's constant for the spectral norm.
const PHI: f64 = 1.618_033_988_749_895;

/// `mu` for Wedin's general bound. The unitarily invariant entry (3) is
/// recorded but has no computable norm family behind it.
pub fn wedin_mu(norm: NormKind) -> f64 {
    match norm {
        NormKind::UnitarilyInvariant => 3.0,
        NormKind::Spectral => PHI,
        NormKind::Frobenius => std::f64::consts::SQRT_2,
    }
}

/// Which row of the equal-rank constant table applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankCase {
    /// `r < min(m, n)`
    Deficient,
    /// `r = min(m, n)` with `m != n`
    FullRectangular,
    /// `r = m = n`
    Nonsingular,
}

impl RankCase {
    pub fn of(rows: usize, cols: usize, rank: usize) -> Self {
        if rank < rows.min(cols) {
            RankCase::Deficient
        } else if rows != cols {
            RankCase::FullRectangular
        } else {
            RankCase::Nonsingular
        }
    }
}

/// `nu` for Wedin's equal-rank bound.
pub fn wedin_nu(case: RankCase, norm: NormKind) -> f64 {
    use NormKind::*;
    use RankCase::*;
    match (case, norm) {
        (Deficient, UnitarilyInvariant) => 3.0,
        (Deficient, Spectral) => PHI,
        (Deficient, Frobenius) => std::f64::consts::SQRT_2,
        (FullRectangular, UnitarilyInvariant) => 2.0,
        (FullRectangular, Spectral) => std::f64::consts::SQRT_2,
        (FullRectangular, Frobenius) => 1.0,
        (Nonsingular, _) => 1.0,
    }
}

const NO_UI_NORM: &str =
    "general unitarily invariant norm: constant recorded, no computable norm family";

fn e_norm(q: &Quantities, norm: NormKind) -> f64 {
    match norm {
        NormKind::Spectral => q.e_2,
        NormKind::Frobenius => q.e_fro,
        NormKind::UnitarilyInvariant => unreachable!("filtered by caller"),
    }
}

/// `||B^+ - A^+|| <= mu max(||A^+||^2, ||B^+||^2) ||E||`.
pub fn wedin_general(q: &Quantities, norm: NormKind) -> BoundValue {
    let name = match norm {
        NormKind::Spectral => "wedin_general_2",
        NormKind::Frobenius => "wedin_general_f",
        NormKind::UnitarilyInvariant => "wedin_general_ui",
    };
    let b = BoundValue::new(name, BoundKind::Upper, Target::Norm, norm);
    if norm == NormKind::UnitarilyInvariant {
        return b.not_applicable(NO_UI_NORM);
    }
    b.with_value(wedin_mu(norm) * q.pa.powi(2).max(q.pb.powi(2)) * e_norm(q, norm))
}

/// `||B^+ - A^+|| <= nu ||A^+|| ||B^+|| ||E||` when `s = r`.
pub fn wedin_equal_rank(q: &Quantities, norm: NormKind) -> BoundValue {
    let name = match norm {
        NormKind::Spectral => "wedin_equal_rank_2",
        NormKind::Frobenius => "wedin_equal_rank_f",
        NormKind::UnitarilyInvariant => "wedin_equal_rank_ui",
    };
    let b = BoundValue::new(name, BoundKind::Upper, Target::Norm, norm);
    if norm == NormKind::UnitarilyInvariant {
        return b.not_applicable(NO_UI_NORM);
    }
    if q.r != q.s {
        return b.not_applicable("requires s = r");
    }
    let nu = wedin_nu(RankCase::of(q.rows, q.cols, q.r), norm);
    b.with_value(nu * q.pa * q.pb * e_norm(q, norm))
}

/// `||B^+ - A^+||_F <= max(||A^+||^2, ||B^+||^2) ||E||_F`.
pub fn meng_zheng(q: &Quantities) -> BoundValue {
    BoundValue::new(
        "meng_zheng",
        BoundKind::Upper,
        Target::Norm,
        NormKind::Frobenius,
    )
    .with_value(q.pa.powi(2).max(q.pb.powi(2)) * q.e_fro)
}

/// `||B^+ - A^+||_F <= ||A^+|| ||B^+|| ||E||_F` when `s = r`.
pub fn meng_zheng_equal_rank(q: &Quantities) -> BoundValue {
    let b = BoundValue::new(
        "meng_zheng_equal_rank",
        BoundKind::Upper,
        Target::Norm,
        NormKind::Frobenius,
    );
    if q.r != q.s {
        return b.not_applicable("requires s = r");
    }
    b.with_value(q.pa * q.pb * q.e_fro)
}

/// The refinement of the squared Meng-Zheng bound:
/// `max(pa^4, pb^4) ||E||^2 - (max(pa^2/pb^2, pb^2/pa^2) - 1)(||A^+EB^+||^2 + ||B^+EA^+||^2) / 2`.
pub fn li_refined(q: &Quantities) -> BoundValue {
    let b = BoundValue::squared("li_refined", BoundKind::Upper);
    if q.r == 0 || q.s == 0 {
        return b.not_applicable("requires A and B nonzero");
    }
    let (pa2, pb2) = (q.pa.powi(2), q.pb.powi(2));
    let ratio = (pa2 / pb2).max(pb2 / pa2);
    b.with_value(pa2.max(pb2).powi(2) * q.e_sq - 0.5 * (ratio - 1.0) * (q.a_e_b + q.b_e_a))
}

fn full_column_rank_a(q: &Quantities) -> bool {
    q.r == q.cols && q.cols <= q.rows
}

/// For `A` of full column rank:
/// `pa^2 pb^2 / (pa^2 + pb^2) (||EA^+||^2 + ||EB^+||^2 + (n - s) pa^2 / pb^2)`.
pub fn li_full_column_rank(q: &Quantities) -> BoundValue {
    let b = BoundValue::squared("li_full_column_rank", BoundKind::Upper);
    if !full_column_rank_a(q) {
        return b.not_applicable("requires rank(A) = n <= m");
    }
    if q.s == 0 {
        return b.not_applicable("requires B nonzero");
    }
    let (pa2, pb2) = (q.pa.powi(2), q.pb.powi(2));
    let deficit = (q.cols - q.s) as f64;
    b.with_value(pa2 * pb2 / (pa2 + pb2) * (q.e_a + q.e_b + deficit * pa2 / pb2))
}

/// For `A`, `B` both of full column rank:
/// `min(pb^2 ||EA^+||^2, pa^2 ||EB^+||^2)`.
pub fn li_full_rank_pair(q: &Quantities) -> BoundValue {
    let b = BoundValue::squared("li_full_rank_pair", BoundKind::Upper);
    if !(full_column_rank_a(q) && q.s == q.cols) {
        return b.not_applicable("requires rank(A) = rank(B) = n <= m");
    }
    b.with_value((q.pb.powi(2) * q.e_a).min(q.pa.powi(2) * q.e_b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_cases() {
        assert_eq!(RankCase::of(3, 2, 1), RankCase::Deficient);
        assert_eq!(RankCase::of(3, 2, 2), RankCase::FullRectangular);
        assert_eq!(RankCase::of(2, 3, 2), RankCase::FullRectangular);
        assert_eq!(RankCase::of(2, 2, 2), RankCase::Nonsingular);
        assert_eq!(RankCase::of(2, 2, 0), RankCase::Deficient);
    }

    #[test]
    fn constants() {
        assert_eq!(PHI, (1.0 + 5f64.sqrt()) / 2.0);
        assert_eq!(wedin_mu(NormKind::Frobenius), 2f64.sqrt());
        assert_eq!(
            wedin_nu(RankCase::FullRectangular, NormKind::Spectral),
            2f64.sqrt()
        );
        assert_eq!(
            wedin_nu(RankCase::FullRectangular, NormKind::UnitarilyInvariant),
            2.0
        );
        assert_eq!(wedin_nu(RankCase::Nonsingular, NormKind::Frobenius), 1.0);
    }
}
