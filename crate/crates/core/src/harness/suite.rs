//! The randomized property suite: every invariant of the pseudoinverse, the
//! frame geometry and the estimators, checked over a list of ensembles.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::ensemble::{gen_pair, haar_unitary, EnsembleSpec};
use crate::bounds::{BoundKind, BoundReport, Quantities, Target};
use crate::geometry::{
    aligning_unitaries, column_gap_identity, energy_split, equal_rank_relations, identity_terms_a,
    identity_terms_b, row_gap_identity, trace_real, von_neumann_sum, PerturbationPair, SplitFrames,
};
use crate::linalg::{penrose_residuals, Matrix, TolPolicy};

/// Relative slack for the envelope, the classical norm bounds and the orderings.
pub const BOUND_TOL: f64 = 1e-8;
/// Relative slack for exact identities.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Relative slack for the Penrose equations.
pub const PENROSE_TOL: f64 = 1e-10;
/// Slack for the trace inequality, relative to `1 + sum sigma_i(M) sigma_i(N)`.
pub const TRACE_TOL: f64 = 1e-9;

pub const PROPERTIES: [&str; 11] = [
    "generation",
    "penrose",
    "sandwich",
    "classical_norms",
    "deviation_split",
    "gap_identities",
    "energy_split",
    "equal_rank_relations",
    "orderings",
    "rank_jump",
    "trace_inequality",
];

/// Tolerance each property's normalised measurement is held to.
pub fn tolerance(property: &str) -> f64 {
    match property {
        "penrose" => PENROSE_TOL,
        "deviation_split" | "gap_identities" | "energy_split" | "equal_rank_relations" => {
            IDENTITY_TOL
        }
        "trace_inequality" => TRACE_TOL,
        "generation" => 0.0,
        _ => BOUND_TOL,
    }
}

/// How one property fared across the suite. `worst` is the largest
/// normalised measurement seen; the property fails wherever it exceeds
/// `tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResult {
    pub name: &'static str,
    pub checked: usize,
    pub failures: usize,
    pub worst: f64,
    pub tol: f64,
    pub worst_seed: Option<u64>,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub trials: usize,
    pub properties: Vec<PropertyResult>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyResult::passed)
    }

    pub fn get(&self, name: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.name == name)
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.properties {
            let seed = p
                .worst_seed
                .map_or_else(|| "-".to_string(), |s| s.to_string());
            writeln!(
                f,
                "{} {} checked={} failures={} worst={:.3e} tol={:.0e} seed={}",
                if p.passed() { "PASS" } else { "FAIL" },
                p.name,
                p.checked,
                p.failures,
                p.worst,
                p.tol,
                seed
            )?;
        }
        write!(
            f,
            "{} {} trials",
            if self.passed() { "PASS" } else { "FAIL" },
            self.trials
        )
    }
}

/// One normalised measurement of a property.
struct Check {
    property: &'static str,
    value: f64,
}

fn check(out: &mut Vec<Check>, property: &'static str, value: f64) {
    out.push(Check { property, value });
}

/// `value - limit`, normalised by `1 + |limit|`; negative means slack.
fn rel_excess(value: f64, limit: f64) -> f64 {
    (value - limit) / (1.0 + limit.abs())
}

/// Largest Penrose residual, each normalised by the norms of the factors
/// that enter it (`|M|^2 |X|`, `|X|^2 |M|`, `|M| |X|` in max-abs norm).
pub fn penrose_relative(m: &Matrix, x: &Matrix) -> f64 {
    let (nm, nx) = (m.max_abs(), x.max_abs());
    if nm == 0.0 {
        return nx;
    }
    let res = penrose_residuals(m, x);
    (res.mxm / (nm * nm * nx))
        .max(res.xmx / (nx * nx * nm))
        .max(res.mx_hermitian / (nm * nx))
        .max(res.xm_hermitian / (nm * nx))
}

/// The per-pair properties. `report` is injectable so the suite can be
/// checked against a deliberately broken estimator.
pub fn pair_checks(
    p: &PerturbationPair,
    report: &dyn Fn(&Quantities) -> BoundReport,
) -> Vec<(&'static str, f64)> {
    let mut out = Vec::new();
    let q = Quantities::of(p);
    let r = report(&q);

    check(&mut out, "penrose", penrose_relative(p.a(), p.pinv_a()));
    check(&mut out, "penrose", penrose_relative(p.b(), p.pinv_b()));

    for b in r.uppers.iter().chain(&r.lowers) {
        let Some(v) = b.value() else { continue };
        let (prop, exact) = match b.target {
            Target::SquaredFrobenius => ("sandwich", r.exact_sq),
            Target::Norm => match b.norm {
                crate::bounds::NormKind::Spectral => ("classical_norms", r.exact_norm_2),
                crate::bounds::NormKind::Frobenius => ("classical_norms", r.exact_norm_f),
                crate::bounds::NormKind::UnitarilyInvariant => continue,
            },
        };
        let excess = match b.kind {
            BoundKind::Upper => rel_excess(exact, v),
            BoundKind::Lower => rel_excess(v, exact),
        };
        check(&mut out, prop, excess);
    }

    let exact = r.exact_sq;
    for terms in [identity_terms_a(p), identity_terms_b(p)] {
        let sum: f64 = terms.iter().sum();
        check(
            &mut out,
            "deviation_split",
            (sum - exact).abs() / deviation_scale(&q),
        );
    }
    for id in [column_gap_identity(p), row_gap_identity(p)] {
        check(&mut out, "gap_identities", id.abs_diff() / (1.0 + id.scale));
    }
    for frames in [SplitFrames::LeftOfA, SplitFrames::LeftOfB] {
        let s = energy_split(p, frames);
        check(
            &mut out,
            "energy_split",
            (s.sum() - s.total).abs() / (1.0 + s.total),
        );
    }
    if let Some(d) = equal_rank_relations(p).mismatch() {
        check(&mut out, "equal_rank_relations", d);
    }

    ordering_checks(&q, &r, &mut out);

    if q.s > q.r {
        if let Some(lo) = r.value("singular_value_lower") {
            check(&mut out, "rank_jump", rel_excess((q.pb - q.pa).powi(2), lo));
        }
    }
    out.into_iter().map(|c| (c.property, c.value)).collect()
}

/// First-order rounding scale of `||B^+ - A^+||_F^2`: a perturbation `D`
/// of the deviation moves it by about `2 ||B^+ - A^+|| ||D||`, and `||D||`
/// scales with `||A^+|| + ||B^+||`.
pub fn deviation_scale(q: &Quantities) -> f64 {
    1.0 + q.exact_sq.max(q.exact_sq.sqrt() * (q.pa + q.pb))
}

fn ordering_checks(q: &Quantities, r: &BoundReport, out: &mut Vec<Check>) {
    let mut le = |small: Option<f64>, large: Option<f64>| {
        if let (Some(a), Some(b)) = (small, large) {
            check(out, "orderings", rel_excess(a, b));
        }
    };
    let mz_sq = r.value("meng_zheng").map(|v| v * v);
    le(r.value("energy_averaged_upper"), r.value("li_refined"));
    le(r.value("li_refined"), mz_sq);
    le(r.value("subspace_upper"), r.value("residual_upper"));
    le(r.value("subspace_upper"), r.value("cross_term_upper"));
    le(
        r.value("energy_equal_rank_upper"),
        (q.r == q.s).then(|| q.pa.powi(2) * q.pb.powi(2) * q.e_sq),
    );
    le(r.value("subspace_upper"), r.value("li_full_column_rank"));
    le(r.value("subspace_upper"), r.value("li_full_rank_pair"));
}

/// `Re tr(U M V N*) <= sum sigma_i(M) sigma_i(N)` for a Haar pair `(U, V)`,
/// and equality for the aligning pair. Returns both normalised measurements.
pub fn trace_checks(
    m: &Matrix,
    n: &Matrix,
    rng: &mut ChaCha8Rng,
    field: crate::io::Field,
) -> [f64; 2] {
    let vn = von_neumann_sum(m, n).expect("same shape");
    let u = haar_unitary(rng, m.rows(), field);
    let v = haar_unitary(rng, m.cols(), field);
    let t = trace_real(&(&(&u * m) * &v), n).expect("same shape");
    let (ua, va) = aligning_unitaries(m, n).expect("same shape");
    let t_max = trace_real(&(&(&ua * m) * &va), n).expect("same shape");
    let scale = 1.0 + vn;
    [(t - vn) / scale, (vn - t_max).abs() / scale]
}

/// Seed of trial `t` of a suite rooted at `seed`.
pub fn trial_seed(seed: u64, t: usize) -> u64 {
    seed.wrapping_add((t as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn run_trial(
    spec: &EnsembleSpec,
    report: &(dyn Fn(&Quantities) -> BoundReport + Sync),
) -> Vec<(&'static str, f64)> {
    let (a, b) = match gen_pair(spec) {
        Ok(pair) => pair,
        Err(_) => return vec![("generation", f64::INFINITY)],
    };
    let mut out = vec![("generation", 0.0)];
    let p = match PerturbationPair::new(a.clone(), b.clone(), TolPolicy::Default) {
        Ok(p) if p.r() == spec.r && p.s() == spec.s => p,
        _ => return vec![("generation", f64::INFINITY)],
    };
    out.extend(pair_checks(&p, report));
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0xA5A5_A5A5);
    for e in trace_checks(&a, &b, &mut rng, spec.field) {
        out.push(("trace_inequality", e));
    }
    out
}

/// Runs `trials` pairs, cycling through `specs`; trial `t` uses
/// `specs[t % len]` reseeded with [`trial_seed`].
pub fn run_property_suite(specs: &[EnsembleSpec], trials: usize) -> SuiteResult {
    run_property_suite_with(specs, trials, &BoundReport::from_quantities)
}

pub fn run_property_suite_with(
    specs: &[EnsembleSpec],
    trials: usize,
    report: &(dyn Fn(&Quantities) -> BoundReport + Sync),
) -> SuiteResult {
    let trials = if specs.is_empty() { 0 } else { trials };
    let outcomes: Vec<(u64, Vec<(&'static str, f64)>)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let base = &specs[t % specs.len()];
            let spec = base.with_seed(trial_seed(base.seed, t));
            (spec.seed, run_trial(&spec, report))
        })
        .collect();

    let mut properties: Vec<PropertyResult> = PROPERTIES
        .iter()
        .map(|&name| PropertyResult {
            name,
            checked: 0,
            failures: 0,
            worst: f64::NEG_INFINITY,
            tol: tolerance(name),
            worst_seed: None,
        })
        .collect();
    for (seed, checks) in &outcomes {
        for &(name, value) in checks {
            let p = properties
                .iter_mut()
                .find(|p| p.name == name)
                .expect("known property");
            p.checked += 1;
            if value.is_nan() || value > p.tol {
                p.failures += 1;
            }
            if value > p.worst || (value.is_nan() && !p.worst.is_nan()) {
                p.worst = value;
                p.worst_seed = Some(*seed);
            }
        }
    }
    for p in &mut properties {
        if p.checked == 0 {
            p.worst = 0.0;
        }
    }
    SuiteResult { trials, properties }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{upper, BoundValue};
    use crate::harness::ensemble::default_specs;

    #[test]
    fn zero_trials_is_vacuous_pass() {
        let r = run_property_suite(&default_specs(1, 10), 0);
        assert!(r.passed());
        assert!(r.properties.iter().all(|p| p.checked == 0));
    }

    #[test]
    fn small_suite_passes() {
        let r = run_property_suite(&default_specs(11, 60), 60);
        assert!(r.passed(), "{r}");
        assert_eq!(r.get("generation").unwrap().checked, 60);
    }

    #[test]
    fn suite_is_deterministic() {
        let specs = default_specs(3, 20);
        assert_eq!(
            run_property_suite(&specs, 20),
            run_property_suite(&specs, 20)
        );
    }

    /// Flipping the sign of the second summand of the first subspace branch
    /// must break the envelope somewhere.
    fn flipped_subspace(q: &Quantities) -> BoundReport {
        let mut r = BoundReport::from_quantities(q);
        let (pa2, pb2) = (q.pa.powi(2), q.pb.powi(2));
        let a1 = pa2 * q.a_e_perp - pb2 * q.e_b_perp;
        let (_, a2) = upper::subspace_branches(q);
        let bad = BoundValue::squared("subspace_upper", BoundKind::Upper)
            .with_value((a1 + q.b_e_a).min(a2 + q.a_e_b));
        for b in &mut r.uppers {
            if b.name == "subspace_upper" {
                *b = bad.clone();
            }
        }
        r
    }

    #[test]
    fn mutated_estimator_is_caught() {
        let r = run_property_suite_with(&default_specs(5, 100), 100, &flipped_subspace);
        assert!(!r.passed());
        let s = r.get("sandwich").unwrap();
        assert!(s.failures > 0);
        assert!(s.worst_seed.is_some());
    }
}
