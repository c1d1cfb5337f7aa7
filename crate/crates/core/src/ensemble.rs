//! Deterministic random matrix families.
//!
//! # Random stream
//!
//! Every trial draws from its own SplitMix64 stream. With `mix` the SplitMix64
//! output function
//!
//! ```text
//! mix(z) = z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//!          z ^= z >> 27; z *= 0x94D049BB133111EB;
//!          z ^ (z >> 31)                         (wrapping u64 arithmetic)
//! ```
//!
//! the state of trial `t` starts at `mix(seed ^ mix(t + 1))` and each draw
//! does `state += 0x9E3779B97F4A7C15; out = mix(state)`.
//!
//! Draws are mapped as follows:
//!
//! * unit uniform `u = (out >> 11) · 2⁻⁵³`, in `[0, 1)`;
//! * symmetric uniform `2u − 1`, in `[−1, 1)`;
//! * small integer `((out as u128 · 19) >> 64) − 9`, in `[−9, 9]`;
//! * rotation angle `2π·u`.
//!
//! # Families
//!
//! Entries are drawn row-major. `scale` (default 1) multiplies every family.
//!
//! * `uniform-random`: real entries, symmetric uniform.
//! * `complex-random`: per entry, real part then imaginary part, symmetric uniform.
//! * `integer-small`: integer entries in `[−9, 9]`.
//! * `scaled-orthogonal`: `scale · Q` with `Q` a rotation product.
//! * `ill-conditioned`: `scale · Q₁ · diag(d) · Q₂` with `d_i = κ^(−i/(n−1))`,
//!   `i = 0..n`, so `σ₁/σ_n = κ` (default `κ = 10⁶`). `Q₁` is drawn before `Q₂`.
//!
//! A rotation product starts from `I` and, for each pair `(i, j)`, `i < j`,
//! in lexicographic order, draws `θ` and replaces columns `i, j` of the
//! current product `Q` by `c·q_i − s·q_j` and `s·q_i + c·q_j`
//! (`c = cos θ`, `s = sin θ`).
//!
//! A singular draw (exactly zero determinant, decided exactly for integer
//! matrices) is discarded and redrawn from the same stream, at most 100 times.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub const MAX_ATTEMPTS: usize = 100;
pub const DEFAULT_KAPPA: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    UniformRandom,
    IllConditioned,
    ScaledOrthogonal,
    IntegerSmall,
    ComplexRandom,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::UniformRandom,
        Family::IllConditioned,
        Family::ScaledOrthogonal,
        Family::IntegerSmall,
        Family::ComplexRandom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::UniformRandom => "uniform-random",
            Family::IllConditioned => "ill-conditioned",
            Family::ScaledOrthogonal => "scaled-orthogonal",
            Family::IntegerSmall => "integer-small",
            Family::ComplexRandom => "complex-random",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown family `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    pub family: Family,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub kappa: Option<f64>,
    pub scale: Option<f64>,
}

impl EnsembleSpec {
    pub fn new(family: Family, n: usize, trials: usize, seed: u64) -> Self {
        EnsembleSpec { family, n, trials, seed, kappa: None, scale: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidSpec("n must be at least 1".into()));
        }
        if self.trials < 1 {
            return Err(Error::InvalidSpec("trials must be at least 1".into()));
        }
        if let Some(k) = self.kappa {
            if !(k >= 1.0 && k.is_finite()) {
                return Err(Error::InvalidSpec(format!("kappa must be finite and >= 1, got {k}")));
            }
        }
        if let Some(c) = self.scale {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::InvalidSpec(format!("scale must be finite and positive, got {c}")));
            }
        }
        Ok(())
    }

    pub fn scale(&self) -> f64 {
        self.scale.unwrap_or(1.0)
    }

    pub fn kappa(&self) -> f64 {
        self.kappa.unwrap_or(DEFAULT_KAPPA)
    }
}

/// SplitMix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(state: u64) -> Self {
        SplitMix64 { state }
    }

    /// The stream for trial `trial` of a run seeded with `seed`.
    pub fn for_trial(seed: u64, trial: u64) -> Self {
        SplitMix64::new(mix64(seed ^ mix64(trial.wrapping_add(1))))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        mix64(self.state)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[−1, 1)`.
    pub fn symmetric(&mut self) -> f64 {
        2.0 * self.unit() - 1.0
    }

    /// Uniform integer in `[−9, 9]`.
    pub fn small_int(&mut self) -> i64 {
        ((self.next_u64() as u128 * 19) >> 64) as i64 - 9
    }
}

fn rotation_product(rng: &mut SplitMix64, n: usize) -> Vec<f64> {
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        q[i * n + i] = 1.0;
    }
    for i in 0..n {
        for j in i + 1..n {
            let theta = 2.0 * PI * rng.unit();
            let (s, c) = theta.sin_cos();
            for k in 0..n {
                let (qi, qj) = (q[k * n + i], q[k * n + j]);
                q[k * n + i] = c * qi - s * qj;
                q[k * n + j] = s * qi + c * qj;
            }
        }
    }
    q
}

fn real_product(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            for j in 0..n {
                out[i * n + j] += x * b[k * n + j];
            }
        }
    }
    out
}

/// Exact integer determinant by fraction-free (Bareiss) elimination.
/// `None` if an intermediate value overflows `i128`.
pub fn integer_determinant(entries: &[i64], n: usize) -> Option<i128> {
    let mut m: Vec<i128> = entries.iter().map(|&x| x as i128).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k * n + k] == 0 {
            let Some(swap) = (k + 1..n).find(|&r| m[r * n + k] != 0) else {
                return Some(0);
            };
            for c in 0..n {
                m.swap(k * n + c, swap * n + c);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i * n + j].checked_mul(m[k * n + k])?.checked_sub(m[i * n + k].checked_mul(m[k * n + j])?)?;
                m[i * n + j] = v / prev;
            }
        }
        prev = m[k * n + k];
    }
    Some(sign * m[(n - 1) * n + (n - 1)])
}

fn integer_singular(entries: &[i64], n: usize) -> bool {
    match integer_determinant(entries, n) {
        Some(d) => d == 0,
        None => {
            let real: Vec<f64> = entries.iter().map(|&x| x as f64).collect();
            let det = Matrix::from_real(n, &real).expect("finite entries").determinant();
            det.is_zero() || det.abs() < 0.5
        }
    }
}

fn draw(spec: &EnsembleSpec, rng: &mut SplitMix64) -> Result<Option<Matrix>> {
    let n = spec.n;
    let c = spec.scale();
    let matrix = match spec.family {
        Family::UniformRandom => {
            let v: Vec<f64> = (0..n * n).map(|_| c * rng.symmetric()).collect();
            Matrix::from_real(n, &v)?
        }
        Family::ComplexRandom => {
            let v: Vec<Complex64> = (0..n * n)
                .map(|_| {
                    let re = rng.symmetric();
                    let im = rng.symmetric();
                    Complex64::new(c * re, c * im)
                })
                .collect();
            Matrix::new(n, v)?
        }
        Family::IntegerSmall => {
            let v: Vec<i64> = (0..n * n).map(|_| rng.small_int()).collect();
            if integer_singular(&v, n) {
                return Ok(None);
            }
            let real: Vec<f64> = v.iter().map(|&x| c * x as f64).collect();
            Matrix::from_real(n, &real)?
        }
        Family::ScaledOrthogonal => {
            let q = rotation_product(rng, n);
            Matrix::from_real(n, &q.iter().map(|x| c * x).collect::<Vec<_>>())?
        }
        Family::IllConditioned => {
            let q1 = rotation_product(rng, n);
            let q2 = rotation_product(rng, n);
            let kappa = spec.kappa();
            let mut scaled = q1;
            for i in 0..n {
                let d = if n == 1 { 1.0 } else { kappa.powf(-(i as f64) / (n - 1) as f64) };
                for k in 0..n {
                    scaled[k * n + i] *= d;
                }
            }
            let prod = real_product(&scaled, &q2, n);
            Matrix::from_real(n, &prod.iter().map(|x| c * x).collect::<Vec<_>>())?
        }
    };
    if matrix.determinant().is_zero() {
        return Ok(None);
    }
    Ok(Some(matrix))
}

/// Matrix number `trial` of the ensemble.
pub fn generate_trial(spec: &EnsembleSpec, trial: usize) -> Result<Matrix> {
    spec.validate()?;
    let mut rng = SplitMix64::for_trial(spec.seed, trial as u64);
    for _ in 0..MAX_ATTEMPTS {
        if let Some(m) = draw(spec, &mut rng)? {
            return Ok(m);
        }
    }
    Err(Error::GenerationFailed { family: spec.family.to_string(), attempts: MAX_ATTEMPTS })
}

/// All `spec.trials` matrices, in trial order.
pub fn generate(spec: &EnsembleSpec) -> Result<Vec<Matrix>> {
    spec.validate()?;
    (0..spec.trials).map(|t| generate_trial(spec, t)).collect()
}
