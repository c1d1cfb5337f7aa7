//! Named runtime checks of the orderings and residual conditions the bounds
//! satisfy in exact arithmetic.
//!
//! Each [`Check`] carries a signed relative slack: non-negative (or above
//! `-chain_check_tol` for ordering comparisons) means the check holds.

use crate::bounds::{BoundsReport, SolverConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub slack: f64,
    pub detail: String,
}

/// Shrink factor for the points probed just below a root.
pub const BELOW_ROOT_FACTOR: f64 = 1.0 - 1e-6;
/// Grid points used to confirm no smaller fixed point lies below `b`.
pub const FIXED_POINT_GRID: usize = 100;

/// `(upper − lower) / max(|lower|, |upper|, 1e-300)`.
pub fn relative_slack(lower: f64, upper: f64) -> f64 {
    (upper - lower) / lower.abs().max(upper.abs()).max(1e-300)
}

fn ordered(name: &str, lower_name: &str, lower: f64, upper_name: &str, upper: f64, tol: f64) -> Check {
    let slack = relative_slack(lower, upper);
    Check {
        name: name.to_string(),
        pass: slack >= -tol,
        slack,
        detail: format!("{upper_name} − {lower_name} = {:+.6e}", upper - lower),
    }
}

/// Chain `0 < l <= l0 <= b1 <= l1 <= b`, `a >= l0`, monotone trace, and
/// every bound `<= σ_min` when the oracle ran.
pub fn ordering_checks(r: &BoundsReport, cfg: &SolverConfig) -> Vec<Check> {
    let tol = cfg.chain_check_tol;
    let mut out =
        vec![Check { name: "chain: 0 < l".into(), pass: r.l > 0.0, slack: r.l, detail: format!("l = {:.6e}", r.l) }];
    out.push(ordered("chain: l <= l0", "l", r.l, "l0", r.l0, tol));
    out.push(ordered("chain: l0 <= b1", "l0", r.l0, "b1", r.b1(), tol));
    out.push(ordered("chain: b1 <= l1", "b1", r.b1(), "l1", r.l1, tol));
    out.push(ordered("chain: l1 <= b", "l1", r.l1, "b", r.b, tol));
    out.push(ordered("lin-xie: l0 <= a", "l0", r.l0, "a", r.a, tol));

    let worst_step = r.b_trace.values.windows(2).map(|w| relative_slack(w[0], w[1])).fold(f64::INFINITY, f64::min);
    let worst_step = if worst_step.is_finite() { worst_step } else { 0.0 };
    out.push(Check {
        name: "theorem2: b_k increasing".into(),
        pass: worst_step >= -tol,
        slack: worst_step,
        detail: format!("{} iterates, smallest relative step {:+.3e}", r.b_trace.iterations(), worst_step),
    });

    if let Some(sigma) = r.sigma_min {
        for (name, value) in r.bounds() {
            out.push(ordered(&format!("bound: {name} <= sigma_min"), name, value, "sigma_min", sigma, tol));
        }
        let top = r.b_trace.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        out.push(ordered("theorem2: b_k <= sigma_min", "max b_k", top, "sigma_min", sigma, tol));
    }
    out
}

/// Every ordering check plus the lemma, residual, grid and spectral-identity
/// checks. The oracle-dependent checks are skipped when `σ_min` is absent.
pub fn invariant_checks(r: &BoundsReport, cfg: &SolverConfig) -> Vec<Check> {
    let tol = cfg.chain_check_tol;
    let mut out = ordering_checks(r, cfg);

    if let Some(sigma) = r.sigma_min {
        let slack = relative_slack(r.l0, sigma);
        out.push(Check {
            name: "lemma1: sigma_min > l0".into(),
            pass: slack > -tol,
            slack,
            detail: format!("sigma_min − l0 = {:+.6e}", sigma - r.l0),
        });
    }

    if let (Some(map), Some(eq)) = (r.fixed_point_map(), r.lin_xie_equation()) {
        if let Some(sigma) = r.sigma_min {
            out.push(match map.eval(sigma) {
                Ok(fs) => ordered("theorem1: f(sigma_min) <= sigma_min", "f(sigma_min)", fs, "sigma_min", sigma, tol),
                Err(e) => Check {
                    name: "theorem1: f(sigma_min) <= sigma_min".into(),
                    pass: false,
                    slack: f64::NEG_INFINITY,
                    detail: e.to_string(),
                },
            });
        }

        let limit = 10.0 * cfg.fixed_point_rel_tol * r.b;
        let residual = r.b_trace.residual;
        out.push(Check {
            name: "theorem3: |b - f(b)|".into(),
            pass: r.b_trace.converged && residual <= limit,
            slack: (limit - residual) / r.b.max(1e-300),
            detail: format!("|b − f(b)| = {residual:.3e} (limit {limit:.3e}, converged: {})", r.b_trace.converged),
        });

        let top = r.b * BELOW_ROOT_FACTOR;
        let mut worst = f64::INFINITY;
        let mut failure = None;
        for k in 1..=FIXED_POINT_GRID {
            let x = top * k as f64 / FIXED_POINT_GRID as f64;
            match map.eval(x) {
                Ok(fx) => worst = worst.min((fx - x) / x),
                Err(e) => {
                    failure = Some(e.to_string());
                    break;
                }
            }
        }
        out.push(Check {
            name: "theorem3: f(x) > x below b".into(),
            pass: failure.is_none() && worst > 0.0,
            slack: worst,
            detail: failure
                .unwrap_or_else(|| format!("min (f(x) − x)/x over {FIXED_POINT_GRID} points = {worst:+.3e}")),
        });

        let limit = 10.0 * cfg.bisection_rel_tol;
        let g_a = eq.relative_residual(r.a);
        out.push(Check {
            name: "lin-xie: |g(a)|".into(),
            pass: g_a.abs() <= limit,
            slack: limit - g_a.abs(),
            detail: format!("|g(a)|/rhs = {:.3e} (limit {limit:.3e})", g_a.abs()),
        });
        let g_below = eq.relative_residual(r.a * BELOW_ROOT_FACTOR);
        out.push(Check {
            name: "lin-xie: g(a(1-1e-6)) < 0".into(),
            pass: g_below < 0.0,
            slack: -g_below,
            detail: format!("g/rhs = {g_below:+.3e}"),
        });
    }

    if let Some(s) = &r.spectrum {
        let trace_gap = (s.eigenvalue_sum() - r.frob_sq).abs() / r.frob_sq.max(1e-300);
        out.push(Check {
            name: "spectrum: sum of eigenvalues = ‖A‖²_F".into(),
            pass: trace_gap <= 1e-10,
            slack: 1e-10 - trace_gap,
            detail: format!("relative gap {trace_gap:.3e}"),
        });
        let det_gap = (s.ln_eigenvalue_product() - 2.0 * r.ln_det_abs).exp_m1().abs();
        out.push(Check {
            name: "spectrum: product of eigenvalues = |det A|²".into(),
            pass: det_gap <= 1e-8,
            slack: 1e-8 - det_gap,
            detail: format!("relative gap {det_gap:.3e}"),
        });
    }
    out
}
