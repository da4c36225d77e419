use pinvpert::bounds::{full_report, BoundReport, Target};
use pinvpert::geometry::{
    aligning_unitaries, deviation_sq, trace_real, von_neumann_sum, PerturbationPair,
};
use pinvpert::harness::ensemble::haar_unitary;
use pinvpert::harness::{gen_pair, EnsembleSpec};
use pinvpert::io::Field;
use pinvpert::{Matrix, TolPolicy};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const BOUND_TOL: f64 = 1e-8;

fn field(complex: bool) -> Field {
    if complex {
        Field::Complex
    } else {
        Field::Real
    }
}

fn random_pair() -> impl Strategy<Value = PerturbationPair> {
    pair_with_cap(1e6)
}

fn pair_with_cap(cap: f64) -> impl Strategy<Value = PerturbationPair> {
    (
        1usize..=6,
        1usize..=6,
        any::<u64>(),
        any::<bool>(),
        any::<bool>(),
    )
        .prop_flat_map(move |(m, n, seed, complex, perturbed)| {
            let k = m.min(n);
            (0..=k, 0..=k).prop_map(move |(r, s)| {
                let mut spec = EnsembleSpec::new(m, n, r, s, field(complex), seed);
                spec.condition_cap = cap;
                if perturbed {
                    spec = spec.perturbed(1e-3);
                }
                let (a, b) = gen_pair(&spec).unwrap();
                PerturbationPair::new(a, b, TolPolicy::Default).unwrap()
            })
        })
}

fn squared_values(report: &BoundReport) -> Vec<(&'static str, f64)> {
    report
        .uppers
        .iter()
        .chain(&report.lowers)
        .filter(|b| b.target == Target::SquaredFrobenius)
        .filter_map(|b| b.value().map(|v| (b.name, v)))
        .collect()
}

/// `(cA, cB)` must give every squared quantity divided by `c^2`, up to a
/// rounding floor set by the pseudoinverse norms.
fn assert_scale_covariant(p: &PerturbationPair, c: f64, rel: f64) -> Result<(), TestCaseError> {
    let scaled =
        PerturbationPair::new(p.a().scale_real(c), p.b().scale_real(c), TolPolicy::Default)
            .unwrap();
    prop_assert_eq!((scaled.r(), scaled.s()), (p.r(), p.s()));
    let (base, after) = (full_report(p), full_report(&scaled));
    let floor = 1e-12 * (p.svd_a().pinv_norm2() + p.svd_b().pinv_norm2()).powi(2);
    let close = |x: f64, y: f64| (x - y).abs() <= rel * x.abs().max(y.abs()) + floor;
    let c2 = c * c;
    prop_assert!(close(after.exact_sq * c2, base.exact_sq));
    for ((name, v), (_, w)) in squared_values(&base)
        .into_iter()
        .zip(squared_values(&after))
    {
        prop_assert!(close(w * c2, v), "{}: {} vs {}", name, w * c2, v);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn every_applicable_bound_brackets_the_exact_value(p in random_pair()) {
        let report = full_report(&p);
        let violations = report.violations(BOUND_TOL);
        prop_assert!(violations.is_empty(), "{:?}", violations);
        let (lo, hi) = report.envelope;
        let slack = BOUND_TOL * (1.0 + report.exact_sq);
        prop_assert!(lo <= report.exact_sq + slack && report.exact_sq <= hi + slack);
    }

    #[test]
    fn power_of_two_scaling_is_exact(p in random_pair(), k in -6i32..=6) {
        assert_scale_covariant(&p, 2f64.powi(k), 1e-12)?;
    }

    #[test]
    fn scaling_a_moderately_conditioned_pair(p in pair_with_cap(1e3), c in 0.1f64..10.0) {
        assert_scale_covariant(&p, c, 1e-9)?;
    }

    #[test]
    fn swapping_the_pair_preserves_the_deviation(p in random_pair()) {
        let (x, y) = (deviation_sq(&p), deviation_sq(&p.swapped()));
        prop_assert!((x - y).abs() <= 1e-9 * (1.0 + x));
    }

    #[test]
    fn von_neumann_sum_bounds_every_rotated_trace(
        m in 1usize..=6,
        n in 1usize..=6,
        seed in any::<u64>(),
        complex in any::<bool>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = field(complex);
        let a = haar_unitary(&mut rng, m, f);
        let b = haar_unitary(&mut rng, m, f);
        let mm = &a * &Matrix::from_fn(m, n, |i, j| ((i + 2 * j) as f64).sin().into());
        let nn = &b * &Matrix::from_fn(m, n, |i, j| ((3 * i + j) as f64).cos().into());
        let bound = von_neumann_sum(&mm, &nn).unwrap();
        let u = haar_unitary(&mut rng, m, f);
        let v = haar_unitary(&mut rng, n, f);
        prop_assert!(trace_real(&(&(&u * &mm) * &v), &nn).unwrap() <= bound + 1e-9);
        let (ua, va) = aligning_unitaries(&mm, &nn).unwrap();
        let attained = trace_real(&(&(&ua * &mm) * &va), &nn).unwrap();
        prop_assert!((attained - bound).abs() <= 1e-9 * (1.0 + bound));
    }
}

#[test]
fn rank_jump_forces_the_lower_bound_to_diverge() {
    let a = Matrix::from_diag(&[1.0, 0.0]);
    let mut previous = 0.0;
    for k in 1..=6 {
        let eps = 10f64.powi(-k);
        let b = Matrix::from_diag(&[1.0, eps]);
        let p = PerturbationPair::new(a.clone(), b, TolPolicy::Default).unwrap();
        let report = full_report(&p);
        let lower = report.value("singular_value_lower").unwrap();
        assert!(
            lower >= (1.0 / eps - 1.0).powi(2) * (1.0 - 1e-12),
            "eps={eps}: {lower}"
        );
        assert!(lower > previous);
        previous = lower;
    }
}
