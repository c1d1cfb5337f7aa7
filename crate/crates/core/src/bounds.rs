//! Lower bounds on `σ_min` built from `|det A|`, `‖A‖²_F` and the spectrum of
//! `AᴴA`.
//!
//! With `n >= 2`, `F = ‖A‖²_F` and `D = |det A|`:
//!
//! * `l  = D ((n−1)/F)^((n−1)/2)` (Yu–Gu)
//! * `l0 = D ((n−1)/(F − l²))^((n−1)/2)` (Zou)
//! * `a`  = smallest positive root of `x² (F − x²)^(n−1) = D² (n−1)^(n−1)` (Lin–Xie)
//! * `l1 = (l0² + |det(l0² I − AᴴA)| ((n−1)/(F − n l0²))^(n−1))^(1/2)`
//! * `b`  = limit of `b_{k+1} = f(b_k)`, `b_1 = f(0)`, where
//!   `f(x) = (l0² + |det(l0² I − AᴴA)| ((n−1)/(F − x² − (n−1) l0²))^(n−1))^(1/2)`.
//!
//! In exact arithmetic `l < l0 < b_1 < l1 < b <= σ_min` and `a > l0`. Every
//! power is evaluated in the log domain.

use crate::checks;
use crate::error::{Error, Result};
use crate::matrix::{GramMatrix, LogScaledScalar, Matrix};
use crate::oracle::{singular_spectrum, Spectrum};

/// Tolerances and iteration caps.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Stop the `b_k` iteration once `|b_{k+1} − b_k| <= tol · b_{k+1}`.
    pub fixed_point_rel_tol: f64,
    pub fixed_point_max_iter: usize,
    /// Stop bisection for `a` once the bracket width is `<= tol · midpoint`.
    pub bisection_rel_tol: f64,
    pub bisection_max_iter: usize,
    /// Relative slack allowed in every ordering comparison.
    pub chain_check_tol: f64,
    pub jacobi_tol: f64,
    pub jacobi_max_sweeps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            fixed_point_rel_tol: 1e-14,
            fixed_point_max_iter: 1000,
            bisection_rel_tol: 1e-14,
            bisection_max_iter: 200,
            chain_check_tol: 1e-9,
            jacobi_tol: 1e-15,
            jacobi_max_sweeps: 100,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let tols = [
            ("fixed_point_rel_tol", self.fixed_point_rel_tol),
            ("bisection_rel_tol", self.bisection_rel_tol),
            ("chain_check_tol", self.chain_check_tol),
            ("jacobi_tol", self.jacobi_tol),
        ];
        for (name, t) in tols {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {t}")));
            }
        }
        let caps = [
            ("fixed_point_max_iter", self.fixed_point_max_iter),
            ("bisection_max_iter", self.bisection_max_iter),
            ("jacobi_max_sweeps", self.jacobi_max_sweeps),
        ];
        for (name, c) in caps {
            if c == 0 {
                return Err(Error::InvalidConfig(format!("{name} must be at least 1")));
            }
        }
        Ok(())
    }
}

/// The iterates `b_1, b_2, …` of the fixed-point sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub values: Vec<f64>,
    /// `b_{k+1} − b_k`, one shorter than `values`.
    pub deltas: Vec<f64>,
    pub converged: bool,
    /// `|b − f(b)|` at the final iterate.
    pub residual: f64,
    /// Newton steps taken after the plain iteration hit its cap.
    pub newton_steps: usize,
}

impl IterationTrace {
    pub fn iterations(&self) -> usize {
        self.values.len()
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        *self.values.last().expect("trace is never empty")
    }
}

fn require_pair_dim(n: usize, context: &'static str) -> Result<f64> {
    if n < 2 {
        return Err(Error::NumericalBreakdown { context, detail: format!("needs n >= 2, got {n}") });
    }
    Ok((n - 1) as f64)
}

fn require_nonsingular(det: &LogScaledScalar) -> Result<()> {
    match det.zero_pivot() {
        Some(column) => Err(Error::SingularMatrix { column }),
        None => Ok(()),
    }
}

/// `l = |det A| ((n−1)/‖A‖²_F)^((n−1)/2)`.
pub fn bound_yu_gu(frob_sq: f64, det: &LogScaledScalar, n: usize) -> Result<f64> {
    let m = require_pair_dim(n, "Yu-Gu bound")?;
    require_nonsingular(det)?;
    if !(frob_sq > 0.0) {
        return Err(Error::NumericalBreakdown {
            context: "Yu-Gu bound",
            detail: format!("‖A‖²_F = {frob_sq:e} is not positive"),
        });
    }
    Ok((det.log_magnitude() + 0.5 * m * (m.ln() - frob_sq.ln())).exp())
}

/// `l0 = |det A| ((n−1)/(‖A‖²_F − l²))^((n−1)/2)`.
pub fn bound_zou(frob_sq: f64, det: &LogScaledScalar, n: usize, l: f64) -> Result<f64> {
    let m = require_pair_dim(n, "Zou bound")?;
    require_nonsingular(det)?;
    let denominator = frob_sq - l * l;
    if !(denominator > 0.0) {
        return Err(Error::NumericalBreakdown {
            context: "Zou bound",
            detail: format!("‖A‖²_F − l² = {denominator:e} is not positive"),
        });
    }
    Ok((det.log_magnitude() + 0.5 * m * (m.ln() - denominator.ln())).exp())
}

fn l1_from_parts(frob_sq: f64, n: usize, l0: f64, shifted: &LogScaledScalar) -> Result<f64> {
    let m = require_pair_dim(n, "l1 bound")?;
    let denominator = frob_sq - n as f64 * l0 * l0;
    if !(denominator > 0.0) {
        return Err(Error::NumericalBreakdown {
            context: "l1 bound",
            detail: format!(
                "‖A‖²_F − n·l0² = {denominator:e} is not positive after rounding; \
                 l0 = {l0:e} remains a valid lower bound"
            ),
        });
    }
    let increment = (shifted.log_magnitude() + m * (m.ln() - denominator.ln())).exp();
    Ok((l0 * l0 + increment).sqrt())
}

/// `l1 = (l0² + |det(l0² I − G)| ((n−1)/(‖A‖²_F − n l0²))^(n−1))^(1/2)`.
pub fn bound_l1(frob_sq: f64, gram: &GramMatrix, l0: f64) -> Result<f64> {
    l1_from_parts(frob_sq, gram.dim(), l0, &gram.shifted_det(l0 * l0))
}

/// The map `f` whose smallest positive fixed point is the bound `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointMap {
    frob_sq: f64,
    l0: f64,
    ln_shifted_det: f64,
    n: usize,
}

impl FixedPointMap {
    /// `shifted_det` is `det(l0² I − AᴴA)`; only its magnitude is used.
    pub fn new(frob_sq: f64, l0: f64, shifted_det: &LogScaledScalar, n: usize) -> Self {
        FixedPointMap { frob_sq, l0, ln_shifted_det: shifted_det.log_magnitude(), n }
    }

    pub fn l0(&self) -> f64 {
        self.l0
    }

    /// `‖A‖²_F − x² − (n−1) l0²`.
    pub fn denominator(&self, x: f64) -> f64 {
        self.frob_sq - x * x - (self.n - 1) as f64 * self.l0 * self.l0
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let m = require_pair_dim(self.n, "fixed-point map")?;
        let denominator = self.denominator(x);
        if !(denominator > 0.0) || x < 0.0 {
            return Err(Error::DomainExceeded { x, denominator });
        }
        let increment = (self.ln_shifted_det + m * (m.ln() - denominator.ln())).exp();
        Ok((self.l0 * self.l0 + increment).sqrt())
    }

    /// Fixed-point iteration from `b_1 = f(0)`, finished by Newton steps if
    /// the iteration cap is reached first.
    pub fn iterate(&self, cfg: &SolverConfig) -> Result<(f64, IterationTrace)> {
        let mut values = vec![self.eval(0.0)?];
        let mut deltas = Vec::new();
        let mut converged = false;
        while values.len() < cfg.fixed_point_max_iter {
            let prev = *values.last().unwrap();
            let next = self.eval(prev)?;
            values.push(next);
            deltas.push(next - prev);
            if (next - prev).abs() <= cfg.fixed_point_rel_tol * next {
                converged = true;
                break;
            }
        }
        let mut b = *values.last().unwrap();
        let mut newton_steps = 0;
        if !converged {
            (b, newton_steps, converged) = self.newton_polish(b, cfg)?;
        }
        let residual = (b - self.eval(b)?).abs();
        Ok((b, IterationTrace { values, deltas, converged, residual, newton_steps }))
    }

    /// Newton on `φ(y) = f(√y)² − y`, which is convex in `y`, so steps from
    /// below a root never overshoot it. Used when plain iteration stalls near
    /// a tangential fixed point.
    fn newton_polish(&self, start: f64, cfg: &SolverConfig) -> Result<(f64, usize, bool)> {
        let m = require_pair_dim(self.n, "fixed-point map")?;
        let mut y = start * start;
        for step in 1..=cfg.fixed_point_max_iter {
            let x = y.sqrt();
            let denominator = self.denominator(x);
            if !(denominator > 0.0) {
                return Err(Error::DomainExceeded { x, denominator });
            }
            let increment = (self.ln_shifted_det + m * (m.ln() - denominator.ln())).exp();
            let l0_sq = self.l0 * self.l0;
            let phi = l0_sq + increment - y;
            let slope = m * increment / denominator - 1.0;
            // below this φ is rounding noise and a tangential root can be overshot
            let noise = 8.0 * f64::EPSILON * (l0_sq + increment + y);
            if !(phi > noise) || !(slope < 0.0) {
                return Ok((x, step - 1, true));
            }
            let next = y - phi / slope;
            if next - y <= cfg.fixed_point_rel_tol * next {
                return Ok((next.sqrt(), step, true));
            }
            y = next;
        }
        Ok((y.sqrt(), cfg.fixed_point_max_iter, false))
    }
}

/// `f(x)` from its scalar ingredients; `shifted_det = |det(l0² I − AᴴA)|`.
pub fn fixed_point_f(x: f64, frob_sq: f64, l0: f64, shifted_det: f64, n: usize) -> Result<f64> {
    let shifted = if shifted_det == 0.0 {
        LogScaledScalar::zero(0)
    } else {
        LogScaledScalar::from_parts(shifted_det.ln(), num_complex::Complex64::new(1.0, 0.0))
    };
    FixedPointMap::new(frob_sq, l0, &shifted, n).eval(x)
}

/// Iterates `b_{k+1} = f(b_k)` to the bound `b`, returning the full trace.
///
/// Hitting `fixed_point_max_iter` is not an error. Newton steps then continue
/// from the last iterate; if they also run out the trace comes back with
/// `converged == false` and a value that is still a lower bound.
pub fn bound_b_iterate(frob_sq: f64, gram: &GramMatrix, l0: f64, cfg: &SolverConfig) -> Result<(f64, IterationTrace)> {
    let shifted = gram.shifted_det(l0 * l0);
    FixedPointMap::new(frob_sq, l0, &shifted, gram.dim()).iterate(cfg)
}

/// `g(x) = x² (F − x²)^(n−1) − D² (n−1)^(n−1)`, evaluated as `g(x) / rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinXieEquation {
    frob_sq: f64,
    ln_rhs: f64,
    n: usize,
}

impl LinXieEquation {
    pub fn new(frob_sq: f64, det: &LogScaledScalar, n: usize) -> Self {
        let m = n.saturating_sub(1) as f64;
        LinXieEquation { frob_sq, ln_rhs: 2.0 * det.log_magnitude() + m * m.ln(), n }
    }

    /// `ln(D² (n−1)^(n−1))`.
    pub fn ln_rhs(&self) -> f64 {
        self.ln_rhs
    }

    /// `g(x) / (D² (n−1)^(n−1))`.
    pub fn relative_residual(&self, x: f64) -> f64 {
        let rest = self.frob_sq - x * x;
        if !(rest > 0.0) || x <= 0.0 {
            return -1.0;
        }
        let m = (self.n - 1) as f64;
        (2.0 * x.ln() + m * rest.ln() - self.ln_rhs).exp_m1()
    }

    /// Upper end of the bracket, where the left side peaks: `‖A‖_F / √n`.
    pub fn peak(&self) -> f64 {
        (self.frob_sq / self.n as f64).sqrt()
    }
}

/// The Lin–Xie bound `a` by bisection on `[l0, ‖A‖_F/√n]`.
///
/// The left side of the equation increases on that interval, so a sign change
/// brackets the unique (hence smallest) positive root. An endpoint whose
/// relative residual is within `10 · bisection_rel_tol` is accepted as the root;
/// this happens when `σ_min` is tiny and `l0` already equals `a` to working
/// precision.
pub fn bound_lin_xie(frob_sq: f64, det: &LogScaledScalar, n: usize, l0: f64, cfg: &SolverConfig) -> Result<f64> {
    require_pair_dim(n, "Lin-Xie bound")?;
    require_nonsingular(det)?;
    let eq = LinXieEquation::new(frob_sq, det, n);
    let (mut lo, mut hi) = (l0, eq.peak());
    let (g_lo, g_hi) = (eq.relative_residual(lo), eq.relative_residual(hi));
    let endpoint_slack = 10.0 * cfg.bisection_rel_tol;
    if g_lo.abs() <= endpoint_slack {
        return Ok(lo);
    }
    if g_hi.abs() <= endpoint_slack {
        return Ok(hi);
    }
    if g_lo > 0.0 || g_hi < 0.0 {
        return Err(Error::BracketFailure { lo, hi, g_lo, g_hi });
    }
    for _ in 0..cfg.bisection_max_iter {
        let mid = 0.5 * (lo + hi);
        let g = eq.relative_residual(mid);
        if g == 0.0 {
            return Ok(mid);
        }
        if g < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= cfg.bisection_rel_tol * 0.5 * (lo + hi) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Every bound for one matrix, with the quantities they were built from.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub n: usize,
    pub frob_sq: f64,
    pub det_abs: f64,
    pub ln_det_abs: f64,
    pub l: f64,
    pub l0: f64,
    pub l1: f64,
    pub a: f64,
    pub b: f64,
    pub b_trace: IterationTrace,
    /// `|det(l0² I − AᴴA)|`.
    pub shifted_det_at_l0sq: f64,
    pub ln_shifted_det_at_l0sq: f64,
    pub sigma_min: Option<f64>,
    pub spectrum: Option<Spectrum>,
    pub ordering_ok: bool,
    pub notes: Vec<String>,
}

impl BoundsReport {
    pub fn b1(&self) -> f64 {
        self.b_trace.first()
    }

    /// `(name, value)` for each of the five bounds, in chain order.
    pub fn bounds(&self) -> [(&'static str, f64); 5] {
        [("l", self.l), ("l0", self.l0), ("l1", self.l1), ("a", self.a), ("b", self.b)]
    }

    /// `None` for `n = 1`, where the map is undefined.
    pub fn fixed_point_map(&self) -> Option<FixedPointMap> {
        (self.n >= 2).then_some(FixedPointMap {
            frob_sq: self.frob_sq,
            l0: self.l0,
            ln_shifted_det: self.ln_shifted_det_at_l0sq,
            n: self.n,
        })
    }

    pub fn lin_xie_equation(&self) -> Option<LinXieEquation> {
        (self.n >= 2).then(|| LinXieEquation {
            frob_sq: self.frob_sq,
            ln_rhs: 2.0 * self.ln_det_abs + ((self.n - 1) as f64) * ((self.n - 1) as f64).ln(),
            n: self.n,
        })
    }
}

fn single_entry_report(a: &Matrix, spectrum: Option<Spectrum>) -> BoundsReport {
    let x = a.get(0, 0).norm();
    BoundsReport {
        n: 1,
        frob_sq: a.frobenius_norm_sq(),
        det_abs: x,
        ln_det_abs: x.ln(),
        l: x,
        l0: x,
        l1: x,
        a: x,
        b: x,
        b_trace: IterationTrace { values: vec![x], deltas: vec![], converged: true, residual: 0.0, newton_steps: 0 },
        shifted_det_at_l0sq: 0.0,
        ln_shifted_det_at_l0sq: f64::NEG_INFINITY,
        sigma_min: spectrum.as_ref().map(Spectrum::sigma_min),
        spectrum,
        ordering_ok: true,
        notes: vec!["n = 1: the only singular value is |a11|, so every bound equals it".into()],
    }
}

/// Computes `l, l0, l1, a, b` (in that dependency order), optionally the
/// oracle `σ_min`, and runs the ordering checks.
pub fn compute_all(a: &Matrix, cfg: &SolverConfig, with_oracle: bool) -> Result<BoundsReport> {
    cfg.validate()?;
    let n = a.dim();
    let det = a.determinant();
    require_nonsingular(&det)?;
    let spectrum = if with_oracle { Some(singular_spectrum(a, cfg.jacobi_tol, cfg.jacobi_max_sweeps)?) } else { None };
    if n == 1 {
        return Ok(single_entry_report(a, spectrum));
    }

    let frob_sq = a.frobenius_norm_sq();
    let l = bound_yu_gu(frob_sq, &det, n)?;
    let l0 = bound_zou(frob_sq, &det, n, l)?;
    let shifted = a.shifted_gram_det(l0);
    let l1 = l1_from_parts(frob_sq, n, l0, &shifted)?;
    let (b, b_trace) = FixedPointMap::new(frob_sq, l0, &shifted, n).iterate(cfg)?;
    let lin_xie = bound_lin_xie(frob_sq, &det, n, l0, cfg)?;

    let mut notes = Vec::new();
    if b_trace.newton_steps > 0 {
        notes.push(format!(
            "fixed-point iteration reached the cap of {} iterates; b was refined by {} Newton steps{}",
            b_trace.iterations(),
            b_trace.newton_steps,
            if b_trace.converged { "" } else { " without meeting the tolerance" }
        ));
    }
    if let Some(s) = &spectrum {
        let smallest = s.eigenvalues_of_gram.last().copied().unwrap_or(0.0);
        let gram_norm = s.eigenvalues_of_gram.iter().map(|x| x * x).sum::<f64>().sqrt();
        if smallest < 1e-13 * gram_norm {
            notes.push(
                "σ_min² < 1e-13·‖AᴴA‖_F: the matrix is close to singular and the oracle value \
                 should be trusted less"
                    .into(),
            );
        }
    }
    notes.push(format!("Lin-Xie comparison: a − l1 = {:+.3e}, a − b = {:+.3e}", lin_xie - l1, lin_xie - b));

    let mut report = BoundsReport {
        n,
        frob_sq,
        det_abs: det.abs(),
        ln_det_abs: det.log_magnitude(),
        l,
        l0,
        l1,
        a: lin_xie,
        b,
        b_trace,
        shifted_det_at_l0sq: shifted.abs(),
        ln_shifted_det_at_l0sq: shifted.log_magnitude(),
        sigma_min: spectrum.as_ref().map(Spectrum::sigma_min),
        spectrum,
        ordering_ok: false,
        notes,
    };
    report.ordering_ok = checks::ordering_checks(&report, cfg).iter().all(|c| c.pass);
    Ok(report)
}
