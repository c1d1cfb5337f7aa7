//! Spectral oracle: singular values computed independently of the bounds.
//!
//! Two Jacobi variants live here. [`jacobi_eigenvalues`] is the classical
//! cyclic-by-row method on the Hermitian Gram matrix `AᴴA`. [`singular_spectrum`]
//! runs one-sided (Hestenes) Jacobi directly on the columns of `A`; it never
//! forms `AᴴA`, so `σ_min` keeps its accuracy on ill-conditioned input, and it
//! is what [`sigma_min_exact`] and the bounds verification use.
//! [`charpoly_eigen_bruteforce`] solves the characteristic polynomial in closed
//! form for `n <= 3` and exists to cross-check the Jacobi code.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bounds::SolverConfig;
use crate::error::{Error, Result};
use crate::matrix::{GramMatrix, Matrix};
use crate::scalar::Scalar;

/// Eigenvalues of `AᴴA` and the matching singular values, both descending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues_of_gram: Vec<f64>,
    pub singular_values: Vec<f64>,
}

impl Spectrum {
    pub fn from_eigenvalues(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        let singular_values = eigenvalues.iter().map(|&x| x.max(0.0).sqrt()).collect();
        Spectrum { eigenvalues_of_gram: eigenvalues, singular_values }
    }

    pub fn from_singular_values(mut singular_values: Vec<f64>) -> Self {
        singular_values.sort_by(|a, b| b.total_cmp(a));
        let eigenvalues_of_gram = singular_values.iter().map(|&s| s * s).collect();
        Spectrum { eigenvalues_of_gram, singular_values }
    }

    pub fn sigma_min(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0)
    }

    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// `Σ λ_i`, which should equal `‖A‖²_F`.
    pub fn eigenvalue_sum(&self) -> f64 {
        self.eigenvalues_of_gram.iter().sum()
    }

    /// `ln Π λ_i`, which should equal `2 ln |det A|`.
    pub fn ln_eigenvalue_product(&self) -> f64 {
        self.eigenvalues_of_gram.iter().map(|&x| x.ln()).sum()
    }
}

/// Parameters of the NR-style Jacobi rotation annihilating a real 2x2
/// off-diagonal `m > 0` between diagonals `a` (row p) and `b` (row q).
/// Returns `(c, s, t)`.
fn rotation(a: f64, b: f64, m: f64) -> (f64, f64, f64) {
    let theta = (b - a) / (2.0 * m);
    let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
    let c = 1.0 / t.hypot(1.0);
    (c, t * c, t)
}

fn off_diagonal_norm<T: Scalar>(g: &[T], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += g[i * n + j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn two_sided_jacobi<T: Scalar>(mut g: Vec<T>, n: usize, tol: f64, max_sweeps: usize) -> Result<Vec<f64>> {
    let target = tol * g.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let mut sweep = 0;
    loop {
        let off = off_diagonal_norm(&g, n);
        if off <= target {
            break;
        }
        if sweep == max_sweeps {
            return Err(Error::NotConverged { method: "Jacobi eigenvalue sweep", iterations: sweep, off });
        }
        sweep += 1;
        for p in 0..n {
            for q in p + 1..n {
                let z = g[p * n + q];
                let m = z.abs();
                if m == 0.0 {
                    continue;
                }
                let a = g[p * n + p].re();
                let b = g[q * n + q].re();
                // negligible relative to the diagonal: drop it
                if m <= 0.5 * f64::EPSILON * (a.abs() * b.abs()).sqrt() {
                    g[p * n + q] = T::ZERO;
                    g[q * n + p] = T::ZERO;
                    continue;
                }
                let (c, s, t) = rotation(a, b, m);
                let phase_conj = z.scale(1.0 / m).conj();
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let gkp = g[k * n + p];
                    let gkq = g[k * n + q];
                    let new_kp = gkp.scale(c) - phase_conj * gkq.scale(s);
                    let new_kq = gkp.scale(s) + phase_conj * gkq.scale(c);
                    g[k * n + p] = new_kp;
                    g[k * n + q] = new_kq;
                    g[p * n + k] = new_kp.conj();
                    g[q * n + k] = new_kq.conj();
                }
                g[p * n + p] = T::from_re(a - t * m);
                g[q * n + q] = T::from_re(b + t * m);
                g[p * n + q] = T::ZERO;
                g[q * n + p] = T::ZERO;
            }
        }
    }
    Ok((0..n).map(|i| g[i * n + i].re()).collect())
}

/// Cyclic-by-row Jacobi on a Hermitian Gram matrix.
///
/// Sweeps until the off-diagonal Frobenius norm is at most `tol · ‖G‖_F`.
/// Real input uses real rotations; complex input first rotates the phase of
/// the pivot entry out and then applies the real rotation. Eigenvalues that
/// come out negative but below `tol · ‖G‖_F` in magnitude are clamped to 0.
pub fn jacobi_eigenvalues(g: &GramMatrix, tol: f64, max_sweeps: usize) -> Result<Spectrum> {
    let n = g.dim();
    let mut eig = if g.is_real() {
        two_sided_jacobi(g.entries().iter().map(|z| z.re).collect(), n, tol, max_sweeps)?
    } else {
        two_sided_jacobi(g.entries().to_vec(), n, tol, max_sweeps)?
    };
    let floor = tol * g.frobenius_norm();
    for x in eig.iter_mut() {
        if *x < 0.0 && -*x <= floor {
            *x = 0.0;
        }
    }
    Ok(Spectrum::from_eigenvalues(eig))
}

fn one_sided_jacobi<T: Scalar>(mut a: Vec<T>, n: usize, tol: f64, max_sweeps: usize) -> Result<Vec<f64>> {
    // inner products carry ~n ulps of noise, so the orthogonality test cannot
    // be tighter than that
    let threshold = tol.max(n as f64 * f64::EPSILON);
    let mut worst = 0.0;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        worst = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = T::ZERO;
                for i in 0..n {
                    let x = a[i * n + p];
                    let y = a[i * n + q];
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma = gamma + x.conj() * y;
                }
                let m = gamma.abs();
                if m == 0.0 {
                    continue;
                }
                let cosine = m / (alpha * beta).sqrt();
                if cosine <= threshold {
                    continue;
                }
                worst = worst.max(cosine);
                rotated = true;
                let (c, s, _) = rotation(alpha, beta, m);
                let phase_conj = gamma.scale(1.0 / m).conj();
                for i in 0..n {
                    let x = a[i * n + p];
                    let y = a[i * n + q];
                    a[i * n + p] = x.scale(c) - phase_conj * y.scale(s);
                    a[i * n + q] = x.scale(s) + phase_conj * y.scale(c);
                }
            }
        }
        if !rotated {
            return Ok((0..n).map(|j| (0..n).map(|i| a[i * n + j].norm_sqr()).sum::<f64>().sqrt()).collect());
        }
    }
    Err(Error::NotConverged { method: "one-sided Jacobi SVD", iterations: max_sweeps, off: worst })
}

/// Singular values of `A` by one-sided Jacobi on its columns.
///
/// Column pairs are rotated until every pair has
/// `|a_pᴴ a_q| <= max(tol, n·ε) · ‖a_p‖ ‖a_q‖`; the singular values are then
/// the column norms.
pub fn singular_spectrum(a: &Matrix, tol: f64, max_sweeps: usize) -> Result<Spectrum> {
    let n = a.dim();
    let sv = if a.is_real() {
        one_sided_jacobi(a.entries().iter().map(|z| z.re).collect(), n, tol, max_sweeps)?
    } else {
        one_sided_jacobi(a.entries().to_vec(), n, tol, max_sweeps)?
    };
    Ok(Spectrum::from_singular_values(sv))
}

/// `σ_min(A)`; zero means numerically singular input.
pub fn sigma_min_exact(a: &Matrix, cfg: &SolverConfig) -> Result<f64> {
    Ok(singular_spectrum(a, cfg.jacobi_tol, cfg.jacobi_max_sweeps)?.sigma_min())
}

fn det3(m: &[Complex64]) -> Complex64 {
    m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) + m[2] * (m[3] * m[7] - m[4] * m[6])
}

/// Eigenvalues of a Hermitian `G` with `n <= 3` from its characteristic
/// polynomial: the quadratic formula for `n = 2` and the trigonometric
/// solution of the depressed cubic for `n = 3`.
pub fn charpoly_eigen_bruteforce(g: &GramMatrix) -> Result<Spectrum> {
    let n = g.dim();
    let eig = match n {
        1 => vec![g.get(0, 0).re],
        2 => {
            let a = g.get(0, 0).re;
            let d = g.get(1, 1).re;
            let b = g.get(0, 1).norm_sqr();
            let mean = 0.5 * (a + d);
            let radius = (0.25 * (a - d) * (a - d) + b).sqrt();
            let hi = mean + radius;
            let det = a * d - b;
            // product form for the small root avoids cancellation
            let lo = if hi > 0.0 && mean >= 0.0 { det / hi } else { mean - radius };
            vec![hi, lo]
        }
        3 => {
            let q = g.trace() / 3.0;
            let p1 = g.get(0, 1).norm_sqr() + g.get(0, 2).norm_sqr() + g.get(1, 2).norm_sqr();
            if p1 == 0.0 {
                vec![g.get(0, 0).re, g.get(1, 1).re, g.get(2, 2).re]
            } else {
                let p2 = (0..3).map(|i| (g.get(i, i).re - q).powi(2)).sum::<f64>() + 2.0 * p1;
                let p = (p2 / 6.0).sqrt();
                let mut shifted: Vec<Complex64> = g.entries().to_vec();
                for i in 0..3 {
                    shifted[i * 3 + i] -= q;
                }
                for z in shifted.iter_mut() {
                    *z /= p;
                }
                let r = (0.5 * det3(&shifted).re).clamp(-1.0, 1.0);
                let phi = r.acos() / 3.0;
                let hi = q + 2.0 * p * phi.cos();
                let lo = q + 2.0 * p * (phi + 2.0 * PI / 3.0).cos();
                vec![hi, 3.0 * q - hi - lo, lo]
            }
        }
        _ => return Err(Error::UnsupportedDimension(n)),
    };
    Ok(Spectrum::from_eigenvalues(eig))
}
