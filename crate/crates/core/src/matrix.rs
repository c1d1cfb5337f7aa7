//! Dense square matrices and the scalar quantities every bound consumes.
//!
//! Determinants are carried as [`LogScaledScalar`] (log-magnitude plus unit
//! phase) so that products of many pivots neither overflow nor underflow.
//! LU factorization uses partial pivoting with the largest-magnitude entry of
//! the column as pivot; ties go to the lowest row index. A pivot that is
//! exactly zero marks the matrix singular; there is no epsilon threshold.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense `n x n` complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl Matrix {
    pub fn new(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if entries.len() != n * n {
            return Err(Error::ShapeMismatch { expected: n * n, got: entries.len() });
        }
        if let Some(k) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { row: k / n, col: k % n });
        }
        Ok(Matrix { n, entries })
    }

    pub fn from_real(n: usize, entries: &[f64]) -> Result<Self> {
        Self::new(n, entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Builds a real matrix from row slices; rejects ragged or non-square input.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::NonSquare { rows: n, cols: row.len() });
            }
            entries.extend_from_slice(row);
        }
        Self::from_real(n, &entries)
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "identity needs n >= 1");
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            entries[i * n + i] = Complex64::new(1.0, 0.0);
        }
        Matrix { n, entries }
    }

    pub fn diagonal(d: &[f64]) -> Result<Self> {
        let n = d.len();
        let mut entries = vec![0.0; n * n];
        for (i, &x) in d.iter().enumerate() {
            entries[i * n + i] = x;
        }
        Self::from_real(n, &entries)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// True when every imaginary part is zero.
    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    pub(crate) fn real_entries(&self) -> Vec<f64> {
        self.entries.iter().map(|z| z.re).collect()
    }

    pub fn scaled(&self, c: f64) -> Matrix {
        Matrix { n: self.n, entries: self.entries.iter().map(|z| z * c).collect() }
    }

    pub fn with_rows_swapped(&self, i: usize, j: usize) -> Matrix {
        let mut out = self.clone();
        if i != j {
            for k in 0..self.n {
                out.entries.swap(i * self.n + k, j * self.n + k);
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> Matrix {
        let n = self.n;
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        Matrix { n, entries }
    }

    /// `‖A‖²_F = Σ |a_ij|²`.
    pub fn frobenius_norm_sq(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `det A` in log-scaled form via LU with partial pivoting.
    pub fn determinant(&self) -> LogScaledScalar {
        if self.is_real() {
            lu_log_det(self.real_entries(), self.n)
        } else {
            lu_log_det(self.entries.clone(), self.n)
        }
    }

    /// `det(μ² I − AᴴA)` from the `2n × 2n` matrix `[[μI, A], [Aᴴ, μI]]`,
    /// which has the same determinant without forming `AᴴA`.
    pub fn shifted_gram_det(&self, mu: f64) -> LogScaledScalar {
        let n = self.n;
        let w = 2 * n;
        if self.is_real() {
            let mut m = vec![0.0; w * w];
            for i in 0..n {
                m[i * w + i] = mu;
                m[(n + i) * w + n + i] = mu;
                for j in 0..n {
                    let v = self.entries[i * n + j].re;
                    m[i * w + n + j] = v;
                    m[(n + j) * w + i] = v;
                }
            }
            lu_log_det(m, w)
        } else {
            let mut m = vec![Complex64::new(0.0, 0.0); w * w];
            for i in 0..n {
                m[i * w + i] = Complex64::new(mu, 0.0);
                m[(n + i) * w + n + i] = Complex64::new(mu, 0.0);
                for j in 0..n {
                    let v = self.entries[i * n + j];
                    m[i * w + n + j] = v;
                    m[(n + j) * w + i] = v.conj();
                }
            }
            lu_log_det(m, w)
        }
    }

    /// The Gram matrix `AᴴA`, Hermitian by construction.
    pub fn gram(&self) -> GramMatrix {
        let n = self.n;
        let mut g = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.entries[k * n + i].conj() * self.entries[k * n + j];
                }
                g[i * n + j] = acc;
            }
        }
        GramMatrix::mirror_lower(n, g)
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix product");
        let n = self.n;
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * rhs.entries[k * n + j];
                }
            }
        }
        Matrix { n, entries }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix({}x{}) [", self.n, self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| {
                    let z = self.get(i, j);
                    if z.im == 0.0 {
                        format!("{}", z.re)
                    } else {
                        format!("{}", z)
                    }
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `AᴴA`: entry (i, j) is exactly the conjugate of entry (j, i) and the
/// diagonal is exactly real.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl GramMatrix {
    /// Takes the lower triangle of `entries` and mirrors it into the upper.
    pub fn from_lower(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if entries.len() != n * n {
            return Err(Error::ShapeMismatch { expected: n * n, got: entries.len() });
        }
        Ok(Self::mirror_lower(n, entries))
    }

    pub fn from_real_lower(n: usize, entries: &[f64]) -> Result<Self> {
        Self::from_lower(n, entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn diagonal(d: &[f64]) -> Result<Self> {
        let n = d.len();
        let mut entries = vec![0.0; n * n];
        for (i, &x) in d.iter().enumerate() {
            entries[i * n + i] = x;
        }
        Self::from_real_lower(n, &entries)
    }

    fn mirror_lower(n: usize, mut g: Vec<Complex64>) -> Self {
        for i in 0..n {
            g[i * n + i].im = 0.0;
            for j in 0..i {
                g[j * n + i] = g[i * n + j].conj();
            }
        }
        GramMatrix { n, entries: g }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.entries[i * self.n + i].re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `det(λI − G)` in log-scaled form.
    pub fn shifted_det(&self, lambda: f64) -> LogScaledScalar {
        let n = self.n;
        if self.is_real() {
            let mut m: Vec<f64> = self.entries.iter().map(|z| -z.re).collect();
            for i in 0..n {
                m[i * n + i] += lambda;
            }
            lu_log_det(m, n)
        } else {
            let mut m: Vec<Complex64> = self.entries.iter().map(|z| -z).collect();
            for i in 0..n {
                m[i * n + i] += lambda;
            }
            lu_log_det(m, n)
        }
    }

    /// `|det(λI − G)|`, exponentiated from the log-scaled value.
    pub fn shifted_det_abs(&self, lambda: f64) -> f64 {
        self.shifted_det(lambda).abs()
    }
}

/// A scalar stored as `phase · exp(log_magnitude)`, or an exact zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogScaledScalar {
    log_magnitude: f64,
    phase: Complex64,
    zero_pivot: Option<usize>,
}

impl LogScaledScalar {
    pub fn from_parts(log_magnitude: f64, phase: Complex64) -> Self {
        LogScaledScalar { log_magnitude, phase, zero_pivot: None }
    }

    /// Exact zero, recording the LU column whose pivot vanished.
    pub fn zero(column: usize) -> Self {
        LogScaledScalar { log_magnitude: f64::NEG_INFINITY, phase: Complex64::new(0.0, 0.0), zero_pivot: Some(column) }
    }

    pub fn is_zero(&self) -> bool {
        self.zero_pivot.is_some()
    }

    pub fn zero_pivot(&self) -> Option<usize> {
        self.zero_pivot
    }

    /// `ln |x|`; `-inf` for an exact zero.
    pub fn log_magnitude(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.log_magnitude
        }
    }

    /// Unit-modulus phase (±1 for real input). Zero when the value is zero.
    pub fn phase(&self) -> Complex64 {
        self.phase
    }

    pub fn abs(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.log_magnitude.exp()
        }
    }

    pub fn value(&self) -> Complex64 {
        self.phase * self.abs()
    }
}

pub(crate) fn lu_log_det<T: Scalar>(mut a: Vec<T>, n: usize) -> LogScaledScalar {
    let mut log_magnitude = 0.0;
    let mut phase = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let mut pivot_row = col;
        let mut best = a[col * n + col].abs();
        for r in col + 1..n {
            let m = a[r * n + col].abs();
            if m > best {
                best = m;
                pivot_row = r;
            }
        }
        if best == 0.0 {
            return LogScaledScalar::zero(col);
        }
        if pivot_row != col {
            for k in 0..n {
                a.swap(col * n + k, pivot_row * n + k);
            }
            phase = -phase;
        }
        let pivot = a[col * n + col];
        log_magnitude += best.ln();
        phase *= pivot.to_complex() / best;
        phase /= phase.norm();
        for r in col + 1..n {
            let factor = a[r * n + col] / pivot;
            if factor == T::ZERO {
                continue;
            }
            for c in col + 1..n {
                a[r * n + c] = a[r * n + c] - factor * a[col * n + c];
            }
        }
    }
    LogScaledScalar::from_parts(log_magnitude, phase)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn example1() -> Matrix {
        Matrix::from_real_rows(&[[4.0, -4.0, -3.0], [3.0, 4.0, 2.0], [4.0, 1.0, 0.0]]).unwrap()
    }
    pub(crate) fn example2() -> Matrix {
        Matrix::from_real_rows(&[[4.0, 0.0, 0.0], [-1.0, 5.0, 0.0], [0.0, 5.0, 4.0]]).unwrap()
    }
    pub(crate) fn example3() -> Matrix {
        Matrix::from_real_rows(&[[3.0, 2.0, 0.0], [1.0, 9.0, 5.0], [0.0, 5.0, 7.0]]).unwrap()
    }

    /// Cofactor expansion along the first row; independent of the LU path.
    fn cofactor_det(a: &Matrix) -> Complex64 {
        let n = a.dim();
        if n == 1 {
            return a.get(0, 0);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let mut minor = Vec::with_capacity((n - 1) * (n - 1));
            for r in 1..n {
                for c in (0..n).filter(|&c| c != j) {
                    minor.push(a.get(r, c));
                }
            }
            let m = Matrix::new(n - 1, minor).unwrap();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            acc += a.get(0, j) * cofactor_det(&m) * sign;
        }
        acc
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn rejects_malformed_construction() {
        assert_eq!(Matrix::from_real(0, &[]), Err(Error::EmptyMatrix));
        assert_eq!(Matrix::from_real(2, &[1.0, 2.0, 3.0]), Err(Error::ShapeMismatch { expected: 4, got: 3 }));
        assert_eq!(Matrix::from_real(2, &[1.0, f64::NAN, 0.0, 1.0]), Err(Error::NonFinite { row: 0, col: 1 }));
        assert_eq!(Matrix::from_real(2, &[1.0, 0.0, f64::INFINITY, 1.0]), Err(Error::NonFinite { row: 1, col: 0 }));
    }

    #[test]
    fn frobenius_examples() {
        // 16+16+9 + 9+16+4 + 16+1+0
        assert_eq!(example1().frobenius_norm_sq(), 87.0);
        // 16 + 1+25 + 25+16
        assert_eq!(example2().frobenius_norm_sq(), 83.0);
        assert_eq!(Matrix::identity(3).frobenius_norm_sq(), 3.0);
        assert_eq!(Matrix::from_real(2, &[0.0; 4]).unwrap().frobenius_norm_sq(), 0.0);
    }

    #[test]
    fn determinant_examples() {
        let d2 = example2().determinant();
        assert!((d2.value() - Complex64::new(80.0, 0.0)).norm() < 1e-12);
        assert_eq!(d2.phase(), Complex64::new(1.0, 0.0));

        let oracle1 = cofactor_det(&example1());
        assert_eq!(oracle1, Complex64::new(-1.0, 0.0));
        let d1 = example1().determinant();
        assert!((d1.value() - oracle1).norm() < 1e-12);
        assert_eq!(d1.phase(), Complex64::new(-1.0, 0.0));

        let oracle3 = cofactor_det(&example3());
        assert_eq!(oracle3, Complex64::new(100.0, 0.0));
        assert!((example3().determinant().value() - oracle3).norm() < 1e-11);
    }

    #[test]
    fn singular_matrix_reports_zero_pivot_column() {
        let a = Matrix::from_real_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        let d = a.determinant();
        assert!(d.is_zero());
        assert_eq!(d.zero_pivot(), Some(1));
        assert_eq!(d.abs(), 0.0);
        assert_eq!(d.log_magnitude(), f64::NEG_INFINITY);

        let z = Matrix::from_real_rows(&[[0.0, 1.0], [0.0, 3.0]]).unwrap();
        assert_eq!(z.determinant().zero_pivot(), Some(0));
    }

    #[test]
    fn pivot_ties_prefer_lowest_row() {
        // |1| == |-1|: no swap, so the phase stays +1 and det = 1*(1) - ... = 2
        let a = Matrix::from_real_rows(&[[1.0, 1.0], [-1.0, 1.0]]).unwrap();
        let d = a.determinant();
        assert!((d.value().re - 2.0).abs() < 1e-15);
        assert_eq!(d.phase(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn complex_determinant_phase_is_unit() {
        let a = Matrix::new(
            2,
            vec![
                Complex64::new(1.0, 1.0),
                Complex64::new(0.0, 2.0),
                Complex64::new(-1.0, 0.5),
                Complex64::new(3.0, -1.0),
            ],
        )
        .unwrap();
        let d = a.determinant();
        let oracle = cofactor_det(&a);
        assert!((d.value() - oracle).norm() < 1e-13 * oracle.norm());
        assert!((d.phase().norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gram_examples() {
        assert_eq!(Matrix::identity(2).gram(), GramMatrix::diagonal(&[1.0, 1.0]).unwrap());
        assert_eq!(Matrix::diagonal(&[1.0, 2.0]).unwrap().gram(), GramMatrix::diagonal(&[1.0, 4.0]).unwrap());
        // direct product oracle: (AᵀA)_ij = Σ_k a_ki a_kj
        let a = example2();
        let g = a.gram();
        let at = a.conj_transpose();
        let full = &at * &a;
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(g.get(i, j), full.get(i, j));
            }
        }
        assert_eq!(g.trace(), 83.0);
    }

    #[test]
    fn gram_is_structurally_hermitian() {
        let a = Matrix::new(3, (0..9).map(|k| Complex64::new(0.3 * k as f64 - 1.0, 0.7 - 0.2 * k as f64)).collect())
            .unwrap();
        let g = a.gram();
        for i in 0..3 {
            assert_eq!(g.get(i, i).im, 0.0);
            for j in 0..3 {
                assert_eq!(g.get(i, j), g.get(j, i).conj());
            }
        }
    }

    #[test]
    fn shifted_gram_det_examples() {
        let g3 = GramMatrix::diagonal(&[1.0, 1.0, 1.0]).unwrap();
        assert!((g3.shifted_det_abs(0.5) - 0.125).abs() < 1e-15);

        let lambda = 4.0 / 4.2;
        let oracle = ((lambda - 1.0) * (lambda - 4.0)).abs();
        let g = GramMatrix::diagonal(&[1.0, 4.0]).unwrap();
        assert!(rel(g.shifted_det_abs(lambda), oracle) < 1e-12);
        assert!((oracle - 0.145124).abs() < 1e-6);

        // λ = 0 gives |det A|²
        for a in [example1(), example2(), example3()] {
            let d = a.determinant().abs();
            assert!(rel(a.gram().shifted_det_abs(0.0), d * d) < 1e-10);
        }
        // λ equal to an eigenvalue of a diagonal Gram is an exact zero
        assert_eq!(g.shifted_det_abs(4.0), 0.0);

        let d = Matrix::diagonal(&[1.0, 2.0]).unwrap();
        assert!(rel(d.shifted_gram_det(lambda.sqrt()).abs(), oracle) < 1e-12);
        for a in [example1(), example2(), example3()] {
            let det = a.determinant().abs();
            assert!(rel(a.shifted_gram_det(0.0).abs(), det * det) < 1e-10);
        }
    }

    fn arb_matrix(max_n: usize, complex: bool) -> impl Strategy<Value = Matrix> {
        (1..=max_n).prop_flat_map(move |n| {
            prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), n * n).prop_map(move |v| {
                let entries =
                    v.into_iter().map(|(re, im)| Complex64::new(re, if complex { im } else { 0.0 })).collect();
                Matrix::new(n, entries).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn gram_trace_matches_frobenius(a in arb_matrix(8, true)) {
            let f = a.frobenius_norm_sq();
            prop_assert!(rel(a.gram().trace(), f) <= 1e-12);
        }

        #[test]
        fn augmented_shifted_det_matches_gram(a in arb_matrix(6, true), mu in 0.0f64..3.0) {
            let via_gram = a.gram().shifted_det(mu * mu);
            let via_aug = a.shifted_gram_det(mu);
            let scale = a.frobenius_norm_sq().powi(a.dim() as i32);
            prop_assert!((via_gram.abs() - via_aug.abs()).abs() <= 1e-9 * scale);
        }

        #[test]
        fn det_squared_matches_shifted_gram_at_zero(a in arb_matrix(6, true)) {
            let d = a.determinant().abs();
            let s = a.gram().shifted_det_abs(0.0);
            prop_assert!(rel(d * d, s) <= 1e-10 || (d * d).max(s) < 1e-200);
        }

        #[test]
        fn row_swap_flips_phase(a in arb_matrix(6, true), i in 0usize..6, j in 0usize..6) {
            let n = a.dim();
            let (i, j) = (i % n, j % n);
            prop_assume!(i != j);
            let d = a.determinant();
            let ds = a.with_rows_swapped(i, j).determinant();
            prop_assume!(!d.is_zero());
            prop_assert!(rel(d.abs(), ds.abs()) <= 1e-12);
            prop_assert!((d.phase() + ds.phase()).norm() <= 1e-10);
        }

        #[test]
        fn diagonal_shifted_det_is_product(d in prop::collection::vec(0.0f64..10.0, 1..8), lambda in 0.0f64..10.0) {
            let g = GramMatrix::diagonal(&d).unwrap();
            let oracle: f64 = d.iter().map(|&x| (lambda - x).abs()).product();
            prop_assert!(rel(g.shifted_det_abs(lambda), oracle) <= 1e-12);
        }

        #[test]
        fn phase_has_unit_modulus(a in arb_matrix(8, true)) {
            let d = a.determinant();
            prop_assume!(!d.is_zero());
            prop_assert!((d.phase().norm() - 1.0).abs() <= 1e-14);
        }
    }
}
