use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pinvpert::bounds::full_report;
use pinvpert::geometry::{
    column_gap_identity, energy_split, equal_rank_relations, identity_terms_a, identity_terms_b,
    row_gap_identity, PerturbationPair, SplitFrames,
};
use pinvpert::harness::suite::{
    deviation_scale, penrose_relative, BOUND_TOL, IDENTITY_TOL, PENROSE_TOL,
};
use pinvpert::harness::{default_specs, run_property_suite, sweep_example, Example, SweepSpec};
use pinvpert::io::{fmt_f64, format_matrix, read_matrix};
use pinvpert::linalg::pinv_of;
use pinvpert::{bounds::Quantities, TolPolicy};

/// Moore-Penrose inverses and perturbation bounds for `||B^+ - A^+||`.
#[derive(Parser)]
#[command(name = "pinvpert", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the pseudoinverse of a matrix file.
    Pinv {
        file: PathBuf,
        /// Absolute singular-value cutoff instead of the default.
        #[arg(long)]
        tol: Option<f64>,
        /// Write the matrix here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate every estimator for the pair (A, B).
    Bounds {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Check the exact identities between frame blocks and products of E.
    VerifyIdentities {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run the randomized property suite.
    Suite {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        trials: usize,
    },
    /// Sweep one of the diagonal model problems over tau.
    Sweep {
        #[arg(long, default_value = "1")]
        example: Example,
        #[arg(long, default_value_t = SweepSpec::DEFAULT_TAU_MIN)]
        tau_min: f64,
        #[arg(long, default_value_t = SweepSpec::DEFAULT_TAU_MAX)]
        tau_max: f64,
        #[arg(long, default_value_t = SweepSpec::DEFAULT_STEPS)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Table,
}

/// Failure modes, mapped to exit codes 2 and 3.
enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<pinvpert::Error> for Failure {
    fn from(e: pinvpert::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn policy(tol: Option<f64>) -> TolPolicy {
    tol.map_or(TolPolicy::Default, TolPolicy::Absolute)
}

/// Writes to stdout. A closed pipe is not an error: the exit code still
/// reports the outcome of the command.
fn say(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            say(text);
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<pinvpert::Matrix, Failure> {
    read_matrix(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_pair(a: &Path, b: &Path, tol: Option<f64>) -> Result<PerturbationPair, Failure> {
    Ok(PerturbationPair::new(load(a)?, load(b)?, policy(tol))?)
}

fn cmd_pinv(file: &Path, tol: Option<f64>, out: Option<&Path>) -> Result<(), Failure> {
    let m = load(file)?;
    let (f, x) = pinv_of(&m, policy(tol))?;
    let sigma: Vec<String> = f.sigma.iter().map(|&s| fmt_f64(s)).collect();
    say(&format!(
        "# rank {}\n# sigma {}\n# pinv_norm2 {}\n",
        f.rank,
        sigma.join(" "),
        fmt_f64(f.pinv_norm2())
    ));
    emit(out, &format_matrix(&x))
}

fn cmd_bounds(
    a: &Path,
    b: &Path,
    tol: Option<f64>,
    out: Option<&Path>,
    format: Format,
) -> Result<(), Failure> {
    let report = full_report(&load_pair(a, b, tol)?);
    let text = match format {
        Format::Csv => report.to_csv(),
        Format::Table => report.to_table(),
    };
    emit(out, &text)?;
    let bad = report.violations(BOUND_TOL);
    if bad.is_empty() {
        return Ok(());
    }
    let names: Vec<String> = bad
        .iter()
        .map(|v| {
            format!(
                "{} ({} vs exact {})",
                v.name,
                fmt_f64(v.value),
                fmt_f64(v.exact)
            )
        })
        .collect();
    Err(Failure::Numerical(format!(
        "bounds violated: {}",
        names.join(", ")
    )))
}

fn cmd_verify(a: &Path, b: &Path, tol: Option<f64>) -> Result<(), Failure> {
    let p = load_pair(a, b, tol)?;
    let q = Quantities::of(&p);
    let mut rows: Vec<(&str, f64, f64, f64, f64)> = Vec::new();
    let dev = deviation_scale(&q);
    for (name, terms) in [
        ("deviation_split_a", identity_terms_a(&p)),
        ("deviation_split_b", identity_terms_b(&p)),
    ] {
        let sum: f64 = terms.iter().sum();
        rows.push((
            name,
            sum,
            q.exact_sq,
            (sum - q.exact_sq).abs() / dev,
            IDENTITY_TOL,
        ));
    }
    for (name, id) in [
        ("column_gap", column_gap_identity(&p)),
        ("row_gap", row_gap_identity(&p)),
    ] {
        rows.push((
            name,
            id.lhs,
            id.rhs,
            id.abs_diff() / (1.0 + id.scale),
            IDENTITY_TOL,
        ));
    }
    for (name, frames) in [
        ("energy_split_left_a", SplitFrames::LeftOfA),
        ("energy_split_left_b", SplitFrames::LeftOfB),
    ] {
        let s = energy_split(&p, frames);
        rows.push((
            name,
            s.sum(),
            s.total,
            (s.sum() - s.total).abs() / (1.0 + s.total),
            IDENTITY_TOL,
        ));
    }
    let rel = equal_rank_relations(&p);
    if let Some(d) = rel.mismatch() {
        rows.push(("equal_rank_u", rel.u12, rel.u21, d, IDENTITY_TOL));
        rows.push(("equal_rank_v", rel.v12, rel.v21, d, IDENTITY_TOL));
    }
    rows.push((
        "penrose_a",
        0.0,
        0.0,
        penrose_relative(p.a(), p.pinv_a()),
        PENROSE_TOL,
    ));
    rows.push((
        "penrose_b",
        0.0,
        0.0,
        penrose_relative(p.b(), p.pinv_b()),
        PENROSE_TOL,
    ));

    let mut text = String::from("status,name,lhs,rhs,rel_diff\n");
    let mut failed = Vec::new();
    for (name, lhs, rhs, diff, limit) in rows {
        let ok = diff <= limit;
        if !ok {
            failed.push(name);
        }
        text.push_str(&format!(
            "{},{name},{},{},{}\n",
            if ok { "PASS" } else { "FAIL" },
            fmt_f64(lhs),
            fmt_f64(rhs),
            fmt_f64(diff)
        ));
    }
    say(&text);
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Numerical(format!(
            "identities failed: {}",
            failed.join(", ")
        )))
    }
}

fn cmd_suite(seed: u64, trials: usize) -> Result<(), Failure> {
    let result = run_property_suite(&default_specs(seed, trials.max(1)), trials);
    say(&format!("{result}\n"));
    if result.passed() {
        Ok(())
    } else {
        Err(Failure::Numerical("property suite failed".into()))
    }
}

fn cmd_sweep(spec: SweepSpec, out: Option<&Path>) -> Result<(), Failure> {
    let table = sweep_example(&spec)?;
    emit(out, &table.to_csv())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Pinv { file, tol, out } => cmd_pinv(&file, tol, out.as_deref()),
        Command::Bounds {
            a,
            b,
            tol,
            out,
            format,
        } => cmd_bounds(&a, &b, tol, out.as_deref(), format),
        Command::VerifyIdentities { a, b, tol } => cmd_verify(&a, &b, tol),
        Command::Suite { seed, trials } => cmd_suite(seed, trials),
        Command::Sweep {
            example,
            tau_min,
            tau_max,
            steps,
            out,
        } => cmd_sweep(
            SweepSpec {
                example,
                tau_min,
                tau_max,
                steps,
            },
            out.as_deref(),
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
