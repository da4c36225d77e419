//! Sweeps of the two diagonal model problems over `tau` in `(1/10, 1/2)`.
//!
//! Both take `A = diag(1, 0)`. The first sets `B = diag(1/(1+2 tau), tau)`,
//! so `||B^+ - A^+||_F^2 = 4 tau^2 + 1/tau^2`; the second sets
//! `B = diag(tau/(1+tau), 2 tau)`, giving `5/(4 tau^2)`.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::bounds::{full_report, BoundReport, Target};
use crate::error::{Error, Result};
use crate::geometry::PerturbationPair;
use crate::io::fmt_f64;
use crate::linalg::{Matrix, TolPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Example {
    One,
    Two,
}

impl FromStr for Example {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "1" => Ok(Example::One),
            "2" => Ok(Example::Two),
            other => Err(format!("example must be 1 or 2, got `{other}`")),
        }
    }
}

pub fn example_pair(example: Example, tau: f64) -> PerturbationPair {
    let a = Matrix::from_diag(&[1.0, 0.0]);
    let b = match example {
        Example::One => Matrix::from_diag(&[1.0 / (1.0 + 2.0 * tau), tau]),
        Example::Two => Matrix::from_diag(&[tau / (1.0 + tau), 2.0 * tau]),
    };
    PerturbationPair::new(a, b, TolPolicy::Default).expect("2x2 diagonal pair")
}

pub fn exact_closed_form(example: Example, tau: f64) -> f64 {
    let t2 = tau * tau;
    match example {
        Example::One => 4.0 * t2 + 1.0 / t2,
        Example::Two => 5.0 / (4.0 * t2),
    }
}

/// Closed forms of the estimators on each model problem, in column order.
pub fn closed_forms(example: Example, tau: f64) -> Vec<(&'static str, f64)> {
    let t2 = tau * tau;
    let base = 4.0 * t2 + 1.0 / t2;
    match example {
        Example::One => {
            let d = 1.0 + 2.0 * tau;
            vec![
                ("li_refined", base + 4.0 / (t2 * d * d) - 4.0),
                ("subspace_upper", base),
                ("residual_upper", base),
                (
                    "cross_term_upper",
                    base + 4.0 * t2 / (d * d) - 4.0 * t2 * t2,
                ),
                ("energy_upper", base),
                ("singular_value_lower", (1.0 - 1.0 / tau).powi(2) + d * d),
                ("singular_value_upper", (1.0 + 1.0 / tau).powi(2) + d * d),
            ]
        }
        Example::Two => {
            let exact = 5.0 / (4.0 * t2);
            vec![
                ("subspace_lower", exact),
                ("residual_lower", exact),
                ("cross_term_lower", exact + 1.0 / (1.0 + tau).powi(2) - 4.0),
                ("energy_lower", base),
                ("singular_value_lower", exact),
                (
                    "singular_value_upper",
                    (2.0 + 1.0 / tau).powi(2) + 1.0 / (4.0 * t2),
                ),
            ]
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub example: Example,
    pub tau_min: f64,
    pub tau_max: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub const DEFAULT_TAU_MIN: f64 = 0.101;
    pub const DEFAULT_TAU_MAX: f64 = 0.49;
    pub const DEFAULT_STEPS: usize = 401;

    pub fn new(example: Example) -> Self {
        Self {
            example,
            tau_min: Self::DEFAULT_TAU_MIN,
            tau_max: Self::DEFAULT_TAU_MAX,
            steps: Self::DEFAULT_STEPS,
        }
    }

    /// Both ends inside the open interval `(0.1, 0.5)`, at least one step,
    /// and a strictly increasing grid when there is more than one step.
    pub fn validate(&self) -> Result<()> {
        let inside = |t: f64| t > 0.1 && t < 0.5;
        if !inside(self.tau_min) || !inside(self.tau_max) {
            return Err(Error::Param(format!(
                "tau range [{}, {}] must lie inside (0.1, 0.5)",
                self.tau_min, self.tau_max
            )));
        }
        if self.steps == 0 {
            return Err(Error::Param("steps must be positive".into()));
        }
        if self.steps > 1 && self.tau_min >= self.tau_max {
            return Err(Error::Param(format!(
                "tau-min {} must be below tau-max {}",
                self.tau_min, self.tau_max
            )));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.tau_min];
        }
        let h = (self.tau_max - self.tau_min) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.tau_max
                } else {
                    self.tau_min + k as f64 * h
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl SweepTable {
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    /// Largest `|computed - closed form|` over all `*_diff` columns.
    pub fn max_closed_form_diff(&self) -> f64 {
        self.columns
            .iter()
            .enumerate()
            .filter(|(_, c)| c.ends_with("_diff"))
            .flat_map(|(j, _)| self.rows.iter().filter_map(move |r| r[j]))
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|v| v.map(fmt_f64).unwrap_or_default())
                .collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

fn squared_names(r: &BoundReport) -> Vec<&'static str> {
    r.uppers
        .iter()
        .chain(&r.lowers)
        .filter(|b| b.target == Target::SquaredFrobenius)
        .map(|b| b.name)
        .collect()
}

/// Evaluates the full report at every grid point. Columns: `tau`, `exact`,
/// `exact_closed`, `exact_diff`, then each estimator with a closed form as
/// `name`, `name_closed`, `name_diff`, then the remaining squared estimators
/// (empty where not applicable).
pub fn sweep_example(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let grid = spec.grid();
    let with_closed: Vec<&'static str> = closed_forms(spec.example, grid[0])
        .iter()
        .map(|c| c.0)
        .collect();
    let probe = full_report(&example_pair(spec.example, grid[0]));
    let others: Vec<&'static str> = squared_names(&probe)
        .into_iter()
        .filter(|n| !with_closed.contains(n))
        .collect();

    let mut columns: Vec<String> = ["tau", "exact", "exact_closed", "exact_diff"]
        .map(String::from)
        .to_vec();
    for n in &with_closed {
        columns.extend([n.to_string(), format!("{n}_closed"), format!("{n}_diff")]);
    }
    columns.extend(others.iter().map(|n| n.to_string()));

    let rows = grid
        .iter()
        .map(|&tau| {
            let r = full_report(&example_pair(spec.example, tau));
            let exact_closed = exact_closed_form(spec.example, tau);
            let mut row = vec![
                Some(tau),
                Some(r.exact_sq),
                Some(exact_closed),
                Some((r.exact_sq - exact_closed).abs()),
            ];
            for (name, closed) in closed_forms(spec.example, tau) {
                let v = r.value(name);
                row.extend([v, Some(closed), v.map(|v| (v - closed).abs())]);
            }
            row.extend(others.iter().map(|n| r.value(n)));
            row
        })
        .collect();
    Ok(SweepTable { columns, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid() {
        let g = SweepSpec::new(Example::One).grid();
        assert_eq!(g.len(), 401);
        assert_eq!(g[0], 0.101);
        assert_eq!(g[400], 0.49);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_ranges_outside_the_open_interval() {
        for (lo, hi, steps) in [
            (0.1, 0.4, 10),
            (0.2, 0.5, 10),
            (0.3, 0.2, 10),
            (0.2, 0.3, 0),
            (0.2, 0.2, 2),
        ] {
            let s = SweepSpec {
                example: Example::Two,
                tau_min: lo,
                tau_max: hi,
                steps,
            };
            assert!(s.validate().is_err(), "{lo} {hi} {steps}");
        }
        let single = SweepSpec {
            example: Example::Two,
            tau_min: 0.25,
            tau_max: 0.25,
            steps: 1,
        };
        assert_eq!(sweep_example(&single).unwrap().rows.len(), 1);
    }

    #[test]
    fn point_values() {
        let one = SweepSpec {
            example: Example::One,
            tau_min: 0.2,
            tau_max: 0.2,
            steps: 1,
        };
        let t = sweep_example(&one).unwrap();
        assert!((t.column("subspace_upper").unwrap()[0].unwrap() - 25.16).abs() < 1e-10);
        let two = SweepSpec {
            example: Example::Two,
            tau_min: 0.25,
            tau_max: 0.25,
            steps: 1,
        };
        let t = sweep_example(&two).unwrap();
        assert!((t.column("subspace_lower").unwrap()[0].unwrap() - 20.0).abs() < 1e-10);
        assert!((t.column("cross_term_lower").unwrap()[0].unwrap() - 16.64).abs() < 1e-10);
    }

    #[test]
    fn csv_header_and_determinism() {
        let spec = SweepSpec {
            steps: 5,
            ..SweepSpec::new(Example::One)
        };
        let csv = sweep_example(&spec).unwrap().to_csv();
        assert!(csv.starts_with(
            "tau,exact,exact_closed,exact_diff,li_refined,li_refined_closed,li_refined_diff,"
        ));
        assert_eq!(csv.lines().count(), 6);
        assert_eq!(csv, sweep_example(&spec).unwrap().to_csv());
    }
}
