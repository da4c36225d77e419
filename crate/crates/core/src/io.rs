//! Plain-text matrix format.
//!
//! ```text
//! # comment lines start with '#'
//! 2 2 real
//! 1 0
//! 0 0
//! ```
//!
//! The header is `m n field` with `field` one of `real` or `complex`. It is
//! followed by `m` lines of `n` entries each; a complex entry is written as
//! two numbers `re im`. Blank lines are ignored.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

impl FromStr for Field {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "real" => Ok(Field::Real),
            "complex" => Ok(Field::Complex),
            other => Err(format!(
                "unknown field `{other}`, expected `real` or `complex`"
            )),
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing header `m n field`"))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(parse_err(
            hline,
            format!("header must be `m n field`, got `{header}`"),
        ));
    }
    let dim = |s: &str| -> Result<usize> {
        match s.parse::<usize>() {
            Ok(d) if d > 0 => Ok(d),
            _ => Err(parse_err(
                hline,
                format!("dimension must be a positive integer, got `{s}`"),
            )),
        }
    };
    let (m, n) = (dim(parts[0])?, dim(parts[1])?);
    let field: Field = parts[2].parse().map_err(|e: String| parse_err(hline, e))?;
    let per_entry = match field {
        Field::Real => 1,
        Field::Complex => 2,
    };

    let mut data = Vec::with_capacity(m * n);
    for i in 0..m {
        let (lno, line) = lines
            .next()
            .ok_or_else(|| parse_err(hline, format!("expected {m} rows, found {i}")))?;
        let nums = line
            .split_whitespace()
            .map(|tok| {
                let x: f64 = tok
                    .parse()
                    .map_err(|_| parse_err(lno, format!("not a number: `{tok}`")))?;
                if x.is_finite() {
                    Ok(x)
                } else {
                    Err(parse_err(lno, format!("non-finite entry `{tok}`")))
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        if nums.len() != n * per_entry {
            return Err(parse_err(
                lno,
                format!(
                    "expected {} numbers on row {}, found {}",
                    n * per_entry,
                    i + 1,
                    nums.len()
                ),
            ));
        }
        match field {
            Field::Real => data.extend(nums.iter().map(|&x| Scalar::new(x, 0.0))),
            Field::Complex => data.extend(nums.chunks(2).map(|c| Scalar::new(c[0], c[1]))),
        }
    }
    if let Some((lno, _)) = lines.next() {
        return Err(parse_err(lno, format!("trailing data after {m} rows")));
    }
    Matrix::from_vec(m, n, data)
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<Matrix> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

/// 17 significant digits, enough to round-trip any double.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `m`, choosing the `real` field when every imaginary part is zero.
pub fn format_matrix(m: &Matrix) -> String {
    let field = if m.is_real() {
        Field::Real
    } else {
        Field::Complex
    };
    let mut out = String::new();
    let name = match field {
        Field::Real => "real",
        Field::Complex => "complex",
    };
    let _ = writeln!(out, "{} {} {}", m.rows(), m.cols(), name);
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|j| {
                let z = m[(i, j)];
                match field {
                    Field::Real => fmt_f64(z.re),
                    Field::Complex => format!("{} {}", fmt_f64(z.re), fmt_f64(z.im)),
                }
            })
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn write_matrix(path: impl AsRef<Path>, m: &Matrix) -> Result<()> {
    std::fs::write(path, format_matrix(m))?;
    Ok(())
}
