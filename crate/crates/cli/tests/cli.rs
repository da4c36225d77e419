use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pinvpert::bounds::full_report;
use pinvpert::geometry::PerturbationPair;
use pinvpert::harness::{sweep_example, Example, SweepSpec};
use pinvpert::io::{parse_matrix, read_matrix};
use pinvpert::TolPolicy;
use tempfile::TempDir;

const BOUNDS_HEADER: &str = "name,kind,target,applicable,value";
const VERIFY_HEADER: &str = "status,name,lhs,rhs,rel_diff";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pinvpert"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// `A = diag(1, 0)` and `B = diag(1/(1 + 2 tau), tau)` at `tau = 0.2`.
fn diagonal_pair(dir: &TempDir) -> (PathBuf, PathBuf) {
    let a = write(dir, "a.txt", "# rank one\n2 2 real\n1 0\n0 0\n");
    let b = write(dir, "b.txt", "2 2 real\n0.7142857142857143 0\n0 0.2\n");
    (a, b)
}

fn field(line: &str, col: usize) -> f64 {
    line.split(',').nth(col).unwrap().parse().unwrap()
}

#[test]
fn pinv_of_rank_one_diagonal() {
    let dir = TempDir::new().unwrap();
    let (a, _) = diagonal_pair(&dir);
    let out = run(&["pinv", s(&a)]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("# rank 1\n"));
    let x = parse_matrix(&text).unwrap();
    assert_eq!(x.max_abs_diff(&read_matrix(&a).unwrap()), 0.0);
}

#[test]
fn pinv_of_full_rank_diagonal_to_file() {
    let dir = TempDir::new().unwrap();
    let (_, b) = diagonal_pair(&dir);
    let target = dir.path().join("x.txt");
    let out = run(&["pinv", s(&b), "--out", s(&target)]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("# rank 2"));
    let x = read_matrix(&target).unwrap();
    assert!((x[(0, 0)].re - 1.4).abs() < 1e-15);
    assert!((x[(1, 1)].re - 5.0).abs() < 1e-15);
    assert_eq!(x[(0, 1)].norm(), 0.0);
}

#[test]
fn absolute_tolerance_truncates_rank() {
    let dir = TempDir::new().unwrap();
    let (_, b) = diagonal_pair(&dir);
    let out = run(&["pinv", s(&b), "--tol", "0.5"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("# rank 1\n"));
}

#[test]
fn matrix_output_uses_seventeen_significant_digits() {
    let dir = TempDir::new().unwrap();
    let (_, b) = diagonal_pair(&dir);
    let text = stdout(&run(&["pinv", s(&b)]));
    let entry = text
        .lines()
        .last()
        .unwrap()
        .split_whitespace()
        .last()
        .unwrap();
    assert_eq!(entry, "5.0000000000000000e0");
}

#[test]
fn malformed_header_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "2 real\n1 0\n0 0\n");
    let out = run(&["pinv", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
}

#[test]
fn missing_file_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let out = run(&["pinv", s(&dir.path().join("absent.txt"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn shape_mismatch_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let (a, _) = diagonal_pair(&dir);
    let wide = write(&dir, "wide.txt", "2 3 real\n1 0 0\n0 1 0\n");
    assert_eq!(run(&["bounds", s(&a), s(&wide)]).status.code(), Some(2));
    assert_eq!(
        run(&["verify-identities", s(&a), s(&wide)]).status.code(),
        Some(2)
    );
}

#[test]
fn bounds_csv_matches_library_report() {
    let dir = TempDir::new().unwrap();
    let (a, b) = diagonal_pair(&dir);
    let out = run(&["bounds", s(&a), s(&b)]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some(BOUNDS_HEADER));
    let exact = text.lines().find(|l| l.starts_with("exact_sq,")).unwrap();
    assert!((field(exact, 4) - 25.16).abs() < 1e-12);

    let p = PerturbationPair::new(
        read_matrix(&a).unwrap(),
        read_matrix(&b).unwrap(),
        TolPolicy::Default,
    )
    .unwrap();
    assert_eq!(text, full_report(&p).to_csv());
}

#[test]
fn bounds_written_to_file_and_as_table() {
    let dir = TempDir::new().unwrap();
    let (a, b) = diagonal_pair(&dir);
    let target = dir.path().join("report.csv");
    assert!(run(&["bounds", s(&a), s(&b), "--out", s(&target)])
        .status
        .success());
    assert!(std::fs::read_to_string(&target)
        .unwrap()
        .starts_with(BOUNDS_HEADER));
    let table = run(&["bounds", s(&a), s(&b), "--format", "table"]);
    assert!(table.status.success());
    assert!(stdout(&table).contains("li_refined"));
}

#[test]
fn identical_pair_has_zero_deviation() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.txt", "3 2 complex\n1 0 0 1\n2 -1 0 0\n0 0.5 3 0\n");
    let text = stdout(&run(&["bounds", s(&m), s(&m)]));
    let exact = text.lines().find(|l| l.starts_with("exact_sq,")).unwrap();
    assert!(field(exact, 4).abs() < 1e-28);
}

#[test]
fn verify_identities_passes_on_diagonal_pair() {
    let dir = TempDir::new().unwrap();
    let (a, b) = diagonal_pair(&dir);
    let out = run(&["verify-identities", s(&a), s(&b)]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(VERIFY_HEADER));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.iter().all(|l| l.starts_with("PASS,")));
    assert!(rows
        .iter()
        .any(|l| l.starts_with("PASS,deviation_split_a,")));
    assert!(!rows.iter().any(|l| l.contains("equal_rank")));
}

#[test]
fn suite_with_zero_trials_passes_vacuously() {
    let out = run(&["suite", "--trials", "0"]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn small_suite_is_deterministic() {
    let first = run(&["suite", "--seed", "7", "--trials", "20"]);
    let second = run(&["suite", "--seed", "7", "--trials", "20"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn default_sweep_has_increasing_grid_and_matches_library() {
    let out = run(&["sweep", "--example", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("tau,exact,exact_closed,exact_diff,"));
    let tau: Vec<f64> = lines.map(|l| field(l, 0)).collect();
    assert_eq!(tau.len(), 401);
    assert!(tau.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(tau[0], 0.101);
    assert_eq!(tau[400], 0.49);

    assert_eq!(
        text,
        sweep_example(&SweepSpec::new(Example::One))
            .unwrap()
            .to_csv()
    );
}

#[test]
fn sweep_second_example_to_file() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("sweep.csv");
    let out = run(&[
        "sweep",
        "--example",
        "2",
        "--steps",
        "5",
        "--out",
        s(&target),
    ]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&target).unwrap().lines().count(), 6);
}

#[test]
fn sweep_rejects_bad_arguments() {
    assert_eq!(run(&["sweep", "--tau-min", "0.05"]).status.code(), Some(2));
    assert_eq!(
        run(&["sweep", "--tau-min", "0.3", "--tau-max", "0.2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["sweep", "--example", "3"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--steps", "0"]).status.code(), Some(2));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    assert_eq!(run(&["invert"]).status.code(), Some(2));
}
