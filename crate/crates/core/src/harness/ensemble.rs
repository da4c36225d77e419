//! Seeded random matrices of prescribed numerical rank.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::io::Field;
use crate::linalg::{svd, Matrix, Scalar, TolPolicy};

/// Regeneration attempts before a spec is declared infeasible.
const MAX_ATTEMPTS: u32 = 64;

/// How `B` relates to `A` in a generated pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairMode {
    /// `A` and `B` drawn independently with ranks `r` and `s`.
    Independent,
    /// `B = (I + eta X) A (I + eta Y)` with Gaussian `X`, `Y`, so `s = r`.
    Perturbed { eta: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub s: usize,
    pub field: Field,
    pub seed: u64,
    /// Largest allowed `sigma_1 / sigma_rank`.
    pub condition_cap: f64,
    /// Smallest allowed `sigma_rank / cutoff`.
    pub separation: f64,
    pub mode: PairMode,
}

impl EnsembleSpec {
    pub fn new(m: usize, n: usize, r: usize, s: usize, field: Field, seed: u64) -> Self {
        Self {
            m,
            n,
            r,
            s,
            field,
            seed,
            condition_cap: 1e6,
            separation: 1e3,
            mode: PairMode::Independent,
        }
    }

    pub fn perturbed(mut self, eta: f64) -> Self {
        self.mode = PairMode::Perturbed { eta };
        self.s = self.r;
        self
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.m.min(self.n);
        if self.m == 0 || self.n == 0 || self.m > 16 || self.n > 16 {
            return Err(Error::Param(format!(
                "dimensions must lie in 1..=16, got {}x{}",
                self.m, self.n
            )));
        }
        if self.r > k || self.s > k {
            return Err(Error::Param(format!(
                "ranks ({}, {}) infeasible for a {}x{} matrix",
                self.r, self.s, self.m, self.n
            )));
        }
        if !(self.condition_cap >= 1.0 && self.condition_cap.is_finite()) {
            return Err(Error::Param(format!(
                "condition cap must be >= 1, got {}",
                self.condition_cap
            )));
        }
        if !(self.separation >= 1.0 && self.separation.is_finite()) {
            return Err(Error::Param(format!(
                "separation must be >= 1, got {}",
                self.separation
            )));
        }
        if let PairMode::Perturbed { eta } = self.mode {
            if self.s != self.r || !(eta.is_finite() && eta >= 0.0) {
                return Err(Error::Param(
                    "perturbed mode needs s = r and a finite eta >= 0".into(),
                ));
            }
        }
        Ok(())
    }
}

fn normal(rng: &mut ChaCha8Rng, field: Field) -> Scalar {
    match field {
        Field::Real => Scalar::new(rng.sample(StandardNormal), 0.0),
        Field::Complex => {
            let (re, im): (f64, f64) = (rng.sample(StandardNormal), rng.sample(StandardNormal));
            Scalar::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        }
    }
}

pub fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize, field: Field) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| normal(rng, field))
}

/// `k` orthonormal columns in dimension `dim`, Haar distributed: Gram-Schmidt
/// (applied twice) on a standard normal matrix.
pub fn haar_frame(rng: &mut ChaCha8Rng, dim: usize, k: usize, field: Field) -> Matrix {
    let g = gaussian(rng, dim, k, field);
    let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(k);
    for j in 0..k {
        let mut v = g.column(j);
        for _ in 0..2 {
            for q in &cols {
                let d: Scalar = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= d * y;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in &mut v {
            *x /= norm;
        }
        cols.push(v);
    }
    Matrix::from_fn(dim, k, |i, j| cols[j][i])
}

/// A Haar unitary of order `dim`.
pub fn haar_unitary(rng: &mut ChaCha8Rng, dim: usize, field: Field) -> Matrix {
    haar_frame(rng, dim, dim, field)
}

/// `sigma_1` log-uniform in `[0.1, 10]`, the rest log-uniform in
/// `[sigma_1 / cap, sigma_1]`, sorted non-increasing.
fn spectrum(rng: &mut ChaCha8Rng, k: usize, cap: f64) -> Vec<f64> {
    if k == 0 {
        return Vec::new();
    }
    let top = 10f64.powf(rng.random_range(-1.0..=1.0));
    let mut s = vec![top];
    s.extend((1..k).map(|_| top * cap.powf(-rng.random::<f64>())));
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

fn draw(rng: &mut ChaCha8Rng, m: usize, n: usize, rank: usize, field: Field, cap: f64) -> Matrix {
    let q1 = haar_frame(rng, m, rank, field);
    let q2 = haar_frame(rng, n, rank, field);
    let sigma = spectrum(rng, rank, cap);
    &q1.scale_cols(&sigma) * &q2.adjoint()
}

/// True when the default cutoff sees exactly `rank` singular values, the
/// smallest of them at least `separation` times the cutoff, and the
/// conditioning within `cap` (with slack for rounding).
fn well_separated(m: &Matrix, rank: usize, cap: f64, separation: f64) -> bool {
    let Ok(f) = svd(m, TolPolicy::Default) else {
        return false;
    };
    if f.rank != rank {
        return false;
    }
    if rank == 0 {
        return true;
    }
    let (top, low) = (f.sigma[0], f.sigma[rank - 1]);
    low >= separation * f.tol && top / low <= cap * (1.0 + 1e-6)
}

fn rng_for(seed: u64, attempt: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt as u64);
    rng
}

/// A single matrix of numerical rank `spec.r`.
pub fn gen_fixed_rank(spec: &EnsembleSpec) -> Result<Matrix> {
    spec.validate()?;
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = rng_for(spec.seed, attempt);
        let a = draw(
            &mut rng,
            spec.m,
            spec.n,
            spec.r,
            spec.field,
            spec.condition_cap,
        );
        if well_separated(&a, spec.r, spec.condition_cap, spec.separation) {
            return Ok(a);
        }
    }
    Err(Error::Param(format!(
        "no well-separated rank-{} matrix after {MAX_ATTEMPTS} attempts",
        spec.r
    )))
}

/// `(A, B)` with numerical ranks `(spec.r, spec.s)`.
pub fn gen_pair(spec: &EnsembleSpec) -> Result<(Matrix, Matrix)> {
    spec.validate()?;
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = rng_for(spec.seed, attempt);
        let (m, n, f, cap) = (spec.m, spec.n, spec.field, spec.condition_cap);
        let a = draw(&mut rng, m, n, spec.r, f, cap);
        let b = match spec.mode {
            PairMode::Independent => draw(&mut rng, m, n, spec.s, f, cap),
            PairMode::Perturbed { eta } => {
                let x = &Matrix::identity(m) + &gaussian(&mut rng, m, m, f).scale_real(eta);
                let y = &Matrix::identity(n) + &gaussian(&mut rng, n, n, f).scale_real(eta);
                &(&x * &a) * &y
            }
        };
        let b_cap = match spec.mode {
            PairMode::Independent => cap,
            PairMode::Perturbed { .. } => f64::INFINITY,
        };
        if well_separated(&a, spec.r, cap, spec.separation)
            && well_separated(&b, spec.s, b_cap, spec.separation)
        {
            return Ok((a, b));
        }
    }
    Err(Error::Param(format!(
        "no well-separated pair of ranks ({}, {}) after {MAX_ATTEMPTS} attempts",
        spec.r, spec.s
    )))
}

/// A deterministic mix of `count` specs over shapes up to 8x8, both fields
/// and every rank combination, led by hand-picked edge cases. About a quarter
/// of the random specs use [`PairMode::Perturbed`].
pub fn default_specs(seed: u64, count: usize) -> Vec<EnsembleSpec> {
    use Field::{Complex, Real};
    let mut specs = vec![
        EnsembleSpec::new(3, 2, 0, 0, Real, 1),
        EnsembleSpec::new(2, 3, 0, 2, Complex, 2),
        EnsembleSpec::new(4, 4, 3, 0, Real, 3),
        EnsembleSpec::new(1, 1, 1, 1, Real, 4),
        EnsembleSpec::new(1, 1, 1, 0, Complex, 5),
        EnsembleSpec::new(8, 8, 8, 8, Complex, 6),
        EnsembleSpec::new(6, 3, 3, 3, Real, 7),
        EnsembleSpec::new(6, 3, 3, 1, Complex, 8),
        EnsembleSpec::new(5, 2, 2, 2, Complex, 9).perturbed(1e-2),
        EnsembleSpec::new(3, 7, 1, 3, Real, 10),
        EnsembleSpec::new(8, 1, 1, 1, Complex, 11),
        EnsembleSpec::new(1, 8, 0, 1, Real, 12),
        EnsembleSpec::new(7, 5, 2, 4, Complex, 13),
        EnsembleSpec::new(4, 6, 4, 4, Real, 14).perturbed(0.3),
    ];
    let mut rng = rng_for(seed, u32::MAX);
    while specs.len() < count {
        let m = rng.random_range(1..=8);
        let n = rng.random_range(1..=8);
        let k = m.min(n);
        let field = if rng.random::<bool>() { Real } else { Complex };
        let r = rng.random_range(0..=k);
        let s = rng.random_range(0..=k);
        let spec = EnsembleSpec::new(m, n, r, s, field, rng.random());
        if rng.random_range(0..4) == 0 {
            specs.push(spec.perturbed(10f64.powf(rng.random_range(-4.0..=-0.5))));
        } else {
            specs.push(spec);
        }
    }
    specs.truncate(count);
    specs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frames_are_orthonormal() {
        let mut rng = rng_for(7, 0);
        let q = haar_frame(&mut rng, 6, 4, Field::Complex);
        let g = &q.adjoint() * &q;
        assert!(g.max_abs_diff(&Matrix::identity(4)) < 1e-14);
        let u = haar_unitary(&mut rng, 5, Field::Real);
        assert!(u.is_real());
        assert!((&u * &u.adjoint()).max_abs_diff(&Matrix::identity(5)) < 1e-14);
    }

    #[test]
    fn requested_rank_is_attained() {
        for (m, n, r) in [(5, 3, 2), (3, 5, 3), (4, 4, 4), (2, 6, 1)] {
            let spec = EnsembleSpec::new(m, n, r, r, Field::Complex, 99);
            let a = gen_fixed_rank(&spec).unwrap();
            let f = svd(&a, TolPolicy::Default).unwrap();
            assert_eq!(f.rank, r);
            assert!(f.sigma[0] / f.sigma[r - 1] <= 1e6 * (1.0 + 1e-6));
        }
    }

    #[test]
    fn rank_zero_is_zero_matrix() {
        let a = gen_fixed_rank(&EnsembleSpec::new(3, 4, 0, 0, Field::Real, 1)).unwrap();
        assert_eq!(a, Matrix::zeros(3, 4));
    }

    #[test]
    fn nonsingular_square_has_reciprocal_pinv_norm() {
        let a = gen_fixed_rank(&EnsembleSpec::new(4, 4, 4, 4, Field::Real, 3)).unwrap();
        let f = svd(&a, TolPolicy::Default).unwrap();
        let x = crate::linalg::pinv(&f);
        let nx = crate::linalg::spectral_norm(&x).unwrap();
        assert!((nx * f.sigma[3] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn same_seed_same_pair() {
        let spec = EnsembleSpec::new(5, 4, 2, 3, Field::Complex, 42);
        assert_eq!(gen_pair(&spec).unwrap(), gen_pair(&spec).unwrap());
        assert_ne!(
            gen_pair(&spec).unwrap(),
            gen_pair(&spec.with_seed(43)).unwrap()
        );
    }

    #[test]
    fn perturbed_pair_keeps_rank() {
        let spec = EnsembleSpec::new(6, 4, 2, 0, Field::Real, 5).perturbed(1e-3);
        let (a, b) = gen_pair(&spec).unwrap();
        assert_eq!(svd(&b, TolPolicy::Default).unwrap().rank, 2);
        assert!((&b - &a).max_abs() < 0.1);
    }

    #[test]
    fn infeasible_rank_is_rejected() {
        let spec = EnsembleSpec::new(2, 3, 3, 0, Field::Real, 0);
        assert!(matches!(gen_fixed_rank(&spec), Err(Error::Param(_))));
    }

    #[test]
    fn default_specs_cover_the_space() {
        let specs = default_specs(2024, 500);
        assert_eq!(specs.len(), 500);
        assert!(specs.iter().all(|s| s.validate().is_ok()));
        assert!(specs.iter().any(|s| s.r != s.s));
        assert!(specs.iter().any(|s| s.r == 0));
        assert!(specs.iter().any(|s| s.field == Field::Complex));
        assert!(specs
            .iter()
            .any(|s| matches!(s.mode, PairMode::Perturbed { .. })));
        assert_eq!(specs, default_specs(2024, 500));
    }
}
