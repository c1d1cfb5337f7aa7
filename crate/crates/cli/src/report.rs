//! Human tables and the machine-readable report document.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::value::RawValue;
use sigmin::{BoundsReport, Check};

pub const SCHEMA_VERSION: &str = "1";
const TRACE_HEAD: usize = 20;
const TRACE_TAIL: usize = 5;

/// Six significant digits, fixed notation for moderate magnitudes.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    // exponent after rounding, so 0.9999999 prints as 1.00000
    let scientific = format!("{x:.5e}");
    let exponent: i32 = scientific.split_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    if (-4..6).contains(&exponent) {
        format!("{:.*}", (5 - exponent).max(0) as usize, x)
    } else {
        scientific
    }
}

/// Seventeen significant digits as a JSON number, `null` when not finite.
pub fn num17(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() { format!("{x:.16e}") } else { "null".to_string() };
    RawValue::from_string(text).expect("formatted float is valid JSON")
}

pub fn human_table(descriptor: &str, r: &BoundsReport, trace: bool) -> String {
    let mut out = String::new();
    writeln!(out, "matrix     {descriptor}").unwrap();
    writeln!(out, "‖A‖²_F     {}", sig6(r.frob_sq)).unwrap();
    writeln!(out, "|det A|    {}", sig6(r.det_abs)).unwrap();
    writeln!(out).unwrap();
    match r.sigma_min {
        Some(sigma) => {
            writeln!(out, "{:<10} {:<14} bound/sigma_min", "bound", "value").unwrap();
            for (name, v) in r.bounds() {
                writeln!(out, "{name:<10} {:<14} {}", sig6(v), sig6(v / sigma)).unwrap();
            }
            writeln!(out, "{:<10} {}", "sigma_min", sig6(sigma)).unwrap();
        }
        None => {
            writeln!(out, "{:<10} value", "bound").unwrap();
            for (name, v) in r.bounds() {
                writeln!(out, "{name:<10} {}", sig6(v)).unwrap();
            }
        }
    }
    writeln!(out).unwrap();
    let status = if r.b_trace.converged { "converged" } else { "not converged" };
    write!(out, "b: {} fixed-point iterates", r.b_trace.iterations()).unwrap();
    if r.b_trace.newton_steps > 0 {
        write!(out, " + {} Newton steps", r.b_trace.newton_steps).unwrap();
    }
    writeln!(out, ", {status}, |b − f(b)| = {:.3e}", r.b_trace.residual).unwrap();
    writeln!(out, "ordering: {}", if r.ordering_ok { "ok" } else { "VIOLATED" }).unwrap();

    if trace {
        writeln!(out).unwrap();
        writeln!(out, "{:>6}  {:<14} b_k − b_{{k−1}}", "k", "b_k").unwrap();
        let values = &r.b_trace.values;
        let shown = |k: usize| k < TRACE_HEAD || k + TRACE_TAIL >= values.len();
        let mut skipped = false;
        for (k, v) in values.iter().enumerate() {
            if !shown(k) {
                if !skipped {
                    writeln!(out, "{:>6}", "…").unwrap();
                    skipped = true;
                }
                continue;
            }
            let delta = if k == 0 { String::new() } else { format!("{:.3e}", r.b_trace.deltas[k - 1]) };
            writeln!(out, "{:>6}  {:<14} {delta}", k + 1, sig6(*v)).unwrap();
        }
    }

    if !r.notes.is_empty() {
        writeln!(out).unwrap();
        writeln!(out, "notes:").unwrap();
        for note in &r.notes {
            writeln!(out, "  - {note}").unwrap();
        }
    }
    out
}

#[derive(Serialize)]
pub struct ReportDocument {
    pub schema_version: &'static str,
    pub input_descriptor: String,
    pub bounds: BoundsProjection,
    pub checks: Vec<CheckEntry>,
    pub timings: Timings,
}

#[derive(Serialize)]
pub struct BoundsProjection {
    n: usize,
    frob_sq: Box<RawValue>,
    det_abs: Box<RawValue>,
    l: Box<RawValue>,
    l0: Box<RawValue>,
    l1: Box<RawValue>,
    a: Box<RawValue>,
    b: Box<RawValue>,
    b1: Box<RawValue>,
    sigma_min: Option<Box<RawValue>>,
    ratios: Option<Ratios>,
    shifted_det_at_l0sq: Box<RawValue>,
    b_iterations: usize,
    b_newton_steps: usize,
    b_converged: bool,
    b_residual: Box<RawValue>,
    ordering_ok: bool,
    notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<Box<RawValue>>>,
}

impl BoundsProjection {
    pub fn new(r: &BoundsReport, trace: bool) -> Self {
        BoundsProjection {
            n: r.n,
            frob_sq: num17(r.frob_sq),
            det_abs: num17(r.det_abs),
            l: num17(r.l),
            l0: num17(r.l0),
            l1: num17(r.l1),
            a: num17(r.a),
            b: num17(r.b),
            b1: num17(r.b1()),
            sigma_min: r.sigma_min.map(num17),
            ratios: r.sigma_min.map(|s| Ratios {
                l: num17(r.l / s),
                l0: num17(r.l0 / s),
                l1: num17(r.l1 / s),
                a: num17(r.a / s),
                b: num17(r.b / s),
            }),
            shifted_det_at_l0sq: num17(r.shifted_det_at_l0sq),
            b_iterations: r.b_trace.iterations(),
            b_newton_steps: r.b_trace.newton_steps,
            b_converged: r.b_trace.converged,
            b_residual: num17(r.b_trace.residual),
            ordering_ok: r.ordering_ok,
            notes: r.notes.clone(),
            trace: trace.then(|| r.b_trace.values.iter().copied().map(num17).collect()),
        }
    }
}

/// Each bound divided by `σ_min`.
#[derive(Serialize)]
pub struct Ratios {
    l: Box<RawValue>,
    l0: Box<RawValue>,
    l1: Box<RawValue>,
    a: Box<RawValue>,
    b: Box<RawValue>,
}

#[derive(Serialize)]
pub struct CheckEntry {
    name: String,
    pass: bool,
    slack: Box<RawValue>,
}

impl From<&Check> for CheckEntry {
    fn from(c: &Check) -> Self {
        CheckEntry { name: c.name.clone(), pass: c.pass, slack: num17(c.slack) }
    }
}

#[derive(Serialize, Default)]
pub struct Timings {
    pub read_us: u128,
    pub parse_us: u128,
    pub bounds_us: u128,
    pub checks_us: u128,
}
