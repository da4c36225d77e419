//! Upper and lower estimates for the deviation `B^+ - A^+` and the report
//! that collects them.
//!
//! Every estimator reads from a [`Quantities`] snapshot of the pair. Squared
//! Frobenius estimates and unsquared norm estimates carry a [`Target`] so the
//! report never compares one against the other's exact value.

pub mod classical;
pub mod lower;
mod quantities;
pub mod singular;
pub mod upper;

use std::fmt::Write as _;

use crate::geometry::PerturbationPair;
use crate::io::fmt_f64;

pub use quantities::Quantities;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Upper,
    Lower,
}

/// What an estimator bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// `||B^+ - A^+||_F^2`
    SquaredFrobenius,
    /// `||B^+ - A^+||` in the estimator's own norm.
    Norm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    Spectral,
    Frobenius,
    UnitarilyInvariant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Status {
    Applicable(f64),
    NotApplicable(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundValue {
    pub name: &'static str,
    pub kind: BoundKind,
    pub target: Target,
    pub norm: NormKind,
    pub status: Status,
}

impl BoundValue {
    pub fn new(name: &'static str, kind: BoundKind, target: Target, norm: NormKind) -> Self {
        Self {
            name,
            kind,
            target,
            norm,
            status: Status::NotApplicable("not evaluated"),
        }
    }

    pub fn squared(name: &'static str, kind: BoundKind) -> Self {
        Self::new(name, kind, Target::SquaredFrobenius, NormKind::Frobenius)
    }

    pub fn with_value(mut self, v: f64) -> Self {
        self.status = Status::Applicable(v);
        self
    }

    pub fn not_applicable(mut self, why: &'static str) -> Self {
        self.status = Status::NotApplicable(why);
        self
    }

    pub fn value(&self) -> Option<f64> {
        match self.status {
            Status::Applicable(v) => Some(v),
            Status::NotApplicable(_) => None,
        }
    }

    /// Label used in the CSV `target` column.
    pub fn target_label(&self) -> &'static str {
        target_label(self.target, self.norm)
    }
}

fn target_label(target: Target, norm: NormKind) -> &'static str {
    match (target, norm) {
        (Target::SquaredFrobenius, _) => "squared_frobenius",
        (Target::Norm, NormKind::Spectral) => "norm_2",
        (Target::Norm, NormKind::Frobenius) => "norm_f",
        (Target::Norm, NormKind::UnitarilyInvariant) => "norm_ui",
    }
}

/// An applicable estimator on the wrong side of the exact value.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub name: &'static str,
    pub kind: BoundKind,
    pub value: f64,
    pub exact: f64,
}

impl Violation {
    pub fn excess(&self) -> f64 {
        match self.kind {
            BoundKind::Upper => self.exact - self.value,
            BoundKind::Lower => self.value - self.exact,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub exact_sq: f64,
    pub exact_norm_2: f64,
    pub exact_norm_f: f64,
    pub uppers: Vec<BoundValue>,
    pub lowers: Vec<BoundValue>,
    /// `(max applicable lower, min applicable upper)` over squared estimators.
    /// The lower end is never below zero.
    pub envelope: (f64, f64),
}

impl BoundReport {
    pub fn from_quantities(q: &Quantities) -> Self {
        let (sv_lo, sv_hi) = singular::singular_value_bounds(q);
        let uppers = vec![
            sv_hi,
            upper::subspace_upper(q),
            upper::residual_upper(q),
            upper::cross_term_upper(q),
            upper::energy_upper(q),
            upper::energy_equal_rank_upper(q),
            upper::energy_averaged_upper(q),
            classical::li_refined(q),
            classical::li_full_column_rank(q),
            classical::li_full_rank_pair(q),
            classical::wedin_general(q, NormKind::Spectral),
            classical::wedin_general(q, NormKind::Frobenius),
            classical::wedin_general(q, NormKind::UnitarilyInvariant),
            classical::wedin_equal_rank(q, NormKind::Spectral),
            classical::wedin_equal_rank(q, NormKind::Frobenius),
            classical::wedin_equal_rank(q, NormKind::UnitarilyInvariant),
            classical::meng_zheng(q),
            classical::meng_zheng_equal_rank(q),
        ];
        let lowers = vec![
            sv_lo,
            lower::subspace_lower(q),
            lower::residual_lower(q),
            lower::cross_term_lower(q),
            lower::energy_lower(q),
            lower::energy_equal_rank_lower(q),
        ];
        let squared = |v: &&BoundValue| v.target == Target::SquaredFrobenius;
        let lo = lowers
            .iter()
            .filter(squared)
            .filter_map(BoundValue::value)
            .fold(0.0, f64::max);
        let hi = uppers
            .iter()
            .filter(squared)
            .filter_map(BoundValue::value)
            .fold(f64::INFINITY, f64::min);
        Self {
            exact_sq: q.exact_sq,
            exact_norm_2: q.exact_2,
            exact_norm_f: q.exact_fro,
            uppers,
            lowers,
            envelope: (lo, hi),
        }
    }

    pub fn get(&self, name: &str) -> Option<&BoundValue> {
        self.uppers
            .iter()
            .chain(&self.lowers)
            .find(|b| b.name == name)
    }

    /// Applicable value of estimator `name`, if any.
    pub fn value(&self, name: &str) -> Option<f64> {
        self.get(name).and_then(BoundValue::value)
    }

    fn exact_for(&self, b: &BoundValue) -> Option<f64> {
        match (b.target, b.norm) {
            (Target::SquaredFrobenius, _) => Some(self.exact_sq),
            (Target::Norm, NormKind::Spectral) => Some(self.exact_norm_2),
            (Target::Norm, NormKind::Frobenius) => Some(self.exact_norm_f),
            (Target::Norm, NormKind::UnitarilyInvariant) => None,
        }
    }

    /// Applicable estimators that miss the exact value of their own target by
    /// more than `rel_tol * (1 + exact)`.
    pub fn violations(&self, rel_tol: f64) -> Vec<Violation> {
        self.uppers
            .iter()
            .chain(&self.lowers)
            .filter_map(|b| {
                let (value, exact) = (b.value()?, self.exact_for(b)?);
                let slack = rel_tol * (1.0 + exact.abs());
                let bad = match b.kind {
                    BoundKind::Upper => value < exact - slack,
                    BoundKind::Lower => value > exact + slack,
                };
                bad.then_some(Violation {
                    name: b.name,
                    kind: b.kind,
                    value,
                    exact,
                })
            })
            .collect()
    }

    fn ordered(&self, target: Target) -> impl Iterator<Item = &BoundValue> {
        self.uppers
            .iter()
            .chain(&self.lowers)
            .filter(move |b| b.target == target)
    }

    /// One row per estimator: exact values first, then the squared section,
    /// the envelope, then the unsquared section.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,kind,target,applicable,value\n");
        let mut row = |name: &str, kind: &str, target: &str, value: Option<f64>| {
            let v = value.map(fmt_f64).unwrap_or_default();
            let _ = writeln!(out, "{name},{kind},{target},{},{v}", value.is_some());
        };
        row(
            "exact_sq",
            "exact",
            "squared_frobenius",
            Some(self.exact_sq),
        );
        row("exact_norm_2", "exact", "norm_2", Some(self.exact_norm_2));
        row("exact_norm_f", "exact", "norm_f", Some(self.exact_norm_f));
        for b in self.ordered(Target::SquaredFrobenius) {
            row(b.name, kind_label(b.kind), b.target_label(), b.value());
        }
        row(
            "envelope_lower",
            "envelope",
            "squared_frobenius",
            Some(self.envelope.0),
        );
        row(
            "envelope_upper",
            "envelope",
            "squared_frobenius",
            finite(self.envelope.1),
        );
        for b in self.ordered(Target::Norm) {
            row(b.name, kind_label(b.kind), b.target_label(), b.value());
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "exact ||B+ - A+||_F^2 = {}", fmt_f64(self.exact_sq));
        let _ = writeln!(
            out,
            "exact ||B+ - A+||_2   = {}",
            fmt_f64(self.exact_norm_2)
        );
        let _ = writeln!(
            out,
            "exact ||B+ - A+||_F   = {}",
            fmt_f64(self.exact_norm_f)
        );
        let _ = writeln!(
            out,
            "envelope              = [{}, {}]",
            fmt_f64(self.envelope.0),
            fmt_f64(self.envelope.1)
        );
        for (title, target) in [
            ("squared Frobenius", Target::SquaredFrobenius),
            ("unsquared", Target::Norm),
        ] {
            let _ = writeln!(out, "\n{title}:");
            let _ = writeln!(out, "{:<26} {:<6} {:<18} value", "name", "kind", "target");
            for b in self.ordered(target) {
                let v = match b.status {
                    Status::Applicable(v) => fmt_f64(v),
                    Status::NotApplicable(why) => format!("n/a ({why})"),
                };
                let _ = writeln!(
                    out,
                    "{:<26} {:<6} {:<18} {v}",
                    b.name,
                    kind_label(b.kind),
                    b.target_label()
                );
            }
        }
        out
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn kind_label(k: BoundKind) -> &'static str {
    match k {
        BoundKind::Upper => "upper",
        BoundKind::Lower => "lower",
    }
}

pub fn full_report(p: &PerturbationPair) -> BoundReport {
    BoundReport::from_quantities(&Quantities::of(p))
}
