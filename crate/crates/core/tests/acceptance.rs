//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use sigmin::checks::{invariant_checks, ordering_checks};
use sigmin::ensemble::SplitMix64;
use sigmin::{
    charpoly_eigen_bruteforce, compute_all, generate, generate_trial, jacobi_eigenvalues, parse_csv,
    parse_matrix_market, to_csv, to_matrix_market, BoundsReport, EnsembleSpec, Family, Matrix, SolverConfig,
};

struct Outcome {
    pass: bool,
    summary: String,
}

fn outcome(pass: bool, summary: impl Into<String>) -> Outcome {
    Outcome { pass, summary: summary.into() }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn example(rows: [[f64; 3]; 3]) -> Matrix {
    Matrix::from_real_rows(&rows).unwrap()
}

fn example1() -> Matrix {
    example([[4.0, -4.0, -3.0], [3.0, 4.0, 2.0], [4.0, 1.0, 0.0]])
}
fn example2() -> Matrix {
    example([[4.0, 0.0, 0.0], [-1.0, 5.0, 0.0], [0.0, 5.0, 4.0]])
}
fn example3() -> Matrix {
    example([[3.0, 2.0, 0.0], [1.0, 9.0, 5.0], [0.0, 5.0, 7.0]])
}

const RUNTIME_EXAMPLE: Duration = Duration::from_millis(10);
const RUNTIME_SUITE: Duration = Duration::from_secs(60);

fn example_1() -> Outcome {
    let cfg = SolverConfig::default();
    let (r, t) = timed(|| compute_all(&example1(), &cfg, true).unwrap());
    let sigma = r.sigma_min.unwrap();
    let checks = [("l", r.l, 0.0229885), ("l0", r.l0, 0.0229886), ("l1", r.l1, 0.0230691)];
    let mut pass = checks.iter().all(|&(_, v, p)| (v - p).abs() <= 5e-7);
    pass &= (sigma - 0.0231).abs() <= 5e-5;
    pass &= t < RUNTIME_EXAMPLE;
    outcome(pass, format!("l={:.7} l0={:.7} l1={:.7} sigma_min={:.7} ({:.2?})", r.l, r.l0, r.l1, sigma, t))
}

fn example_2() -> Outcome {
    let cfg = SolverConfig::default();
    let (r, t) = timed(|| compute_all(&example2(), &cfg, true).unwrap());
    let pass =
        rel(r.l, 1.92771) <= 1e-5 && rel(r.l0, 2.01806) <= 1e-5 && rel(r.l1, 2.31515) <= 1e-5 && t < RUNTIME_EXAMPLE;
    outcome(pass, format!("l={:.6} l0={:.6} l1={:.6} ({:.2?})", r.l, r.l0, r.l1, t))
}

fn example_3() -> Outcome {
    let cfg = SolverConfig::default();
    let (r, t) = timed(|| compute_all(&example3(), &cfg, true).unwrap());
    let pass = rel(r.a, 1.0367) <= 1e-4
        && rel(r.l1, 1.3434) <= 1e-4
        && rel(r.b, 1.3455) <= 1e-4
        && r.b > r.l1
        && r.l1 > r.a
        && t < RUNTIME_EXAMPLE;
    outcome(pass, format!("a={:.5} l1={:.5} b={:.5} ({:.2?})", r.a, r.l1, r.b, t))
}

const SUITE_FAMILIES: [Family; 4] =
    [Family::IntegerSmall, Family::UniformRandom, Family::ComplexRandom, Family::IllConditioned];
const SUITE_TRIALS: usize = 1000;

fn suite_spec(family: Family, n: usize) -> EnsembleSpec {
    let seed = 7_000 + 100 * SUITE_FAMILIES.iter().position(|&f| f == family).unwrap() as u64 + n as u64;
    let kappa = (family == Family::IllConditioned).then_some(1e6);
    EnsembleSpec { kappa, ..EnsembleSpec::new(family, n, SUITE_TRIALS, seed) }
}

struct SuiteRun {
    reports: Vec<(String, BoundsReport)>,
    elapsed: Duration,
    errors: Vec<String>,
}

fn run_suite() -> SuiteRun {
    let cfg = SolverConfig::default();
    let start = Instant::now();
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    for family in SUITE_FAMILIES {
        for n in 2..=8 {
            let spec = suite_spec(family, n);
            for (trial, a) in generate(&spec).unwrap().into_iter().enumerate() {
                let label = format!("{family} n={n} trial={trial}");
                match compute_all(&a, &cfg, true) {
                    Ok(r) => reports.push((label, r)),
                    Err(e) => errors.push(format!("{label}: {e}")),
                }
            }
        }
    }
    SuiteRun { reports, elapsed: start.elapsed(), errors }
}

fn chain_suite(run: &SuiteRun) -> Outcome {
    let cfg = SolverConfig::default();
    let mut chain_violations = Vec::new();
    let mut monotone_violations = 0;
    for (label, r) in &run.reports {
        for c in ordering_checks(r, &cfg) {
            if !c.pass {
                if c.name.starts_with("theorem2: b_k increasing") {
                    monotone_violations += 1;
                }
                chain_violations.push(format!("{label}: {} slack {:+.3e}", c.name, c.slack));
            }
        }
    }
    for v in chain_violations.iter().take(5) {
        println!("      {v}");
    }
    for e in run.errors.iter().take(5) {
        println!("      error {e}");
    }
    let pass = chain_violations.is_empty() && run.errors.is_empty() && run.elapsed < RUNTIME_SUITE;
    outcome(
        pass,
        format!(
            "{} matrices, {} chain violations ({} monotonicity), {} errors ({:.2?})",
            run.reports.len() + run.errors.len(),
            chain_violations.len(),
            monotone_violations,
            run.errors.len(),
            run.elapsed
        ),
    )
}

fn residual_suite(run: &SuiteRun) -> Outcome {
    let cfg = SolverConfig::default();
    let names = ["theorem3: |b - f(b)|", "theorem3: f(x) > x below b", "lin-xie: |g(a)|", "lin-xie: g(a(1-1e-6)) < 0"];
    let mut failures = Vec::new();
    for (label, r) in &run.reports {
        for c in invariant_checks(r, &cfg) {
            if names.contains(&c.name.as_str()) && !c.pass {
                failures.push(format!("{label}: {} ({})", c.name, c.detail));
            }
        }
    }
    for f in failures.iter().take(5) {
        println!("      {f}");
    }
    let pass = failures.is_empty() && run.errors.is_empty();
    outcome(pass, format!("{} matrices, {} residual failures", run.reports.len(), failures.len()))
}

/// σ_min of a 2x2 matrix from y² − ‖A‖²_F y + |det A|² = 0, smaller root in
/// product form.
fn sigma_min_2x2(a: &Matrix) -> f64 {
    let f = a.frobenius_norm_sq();
    let d = (a.get(0, 0) * a.get(1, 1) - a.get(0, 1) * a.get(1, 0)).norm_sqr();
    (2.0 * d / (f + (f * f - 4.0 * d).max(0.0).sqrt())).sqrt()
}

fn n2_exactness() -> Outcome {
    let cfg = SolverConfig::default();
    let spec = EnsembleSpec::new(Family::UniformRandom, 2, 200, 2_002);
    let mut worst_a: f64 = 0.0;
    let mut worst_b: f64 = 0.0;
    for a in generate(&spec).unwrap() {
        let r = compute_all(&a, &cfg, false).unwrap();
        let sigma = sigma_min_2x2(&a);
        worst_a = worst_a.max((r.a - sigma).abs() / sigma);
        worst_b = worst_b.max((r.b - sigma).abs() / sigma);
    }
    outcome(
        worst_a <= 1e-10 && worst_b <= 1e-10,
        format!("200 matrices, max |a − σ|/σ = {worst_a:.2e}, max |b − σ|/σ = {worst_b:.2e}"),
    )
}

fn rotation(rng: &mut SplitMix64, n: usize) -> Matrix {
    let spec = EnsembleSpec::new(Family::ScaledOrthogonal, n, 1, rng.next_u64());
    generate_trial(&spec, 0).unwrap()
}

fn covariance_and_invariance() -> Outcome {
    let cfg = SolverConfig::default();
    let mut rng = SplitMix64::new(0x5eed);
    let mut worst_scale: f64 = 0.0;
    let mut worst_unitary: f64 = 0.0;
    for k in 0..100 {
        let n = 2 + k % 7;
        let family = if k % 2 == 0 { Family::UniformRandom } else { Family::ComplexRandom };
        let a = generate_trial(&EnsembleSpec::new(family, n, 1, rng.next_u64()), 0).unwrap();
        let c = 10f64.powf(6.0 * rng.unit() - 3.0);
        let q = rotation(&mut rng, n);
        let p = rotation(&mut rng, n);
        let base = compute_all(&a, &cfg, false).unwrap();
        let scaled = compute_all(&a.scaled(c), &cfg, false).unwrap();
        let rotated = compute_all(&(&(&q * &a) * &p), &cfg, false).unwrap();
        for ((_, x), ((_, y), (_, z))) in base.bounds().iter().zip(scaled.bounds().iter().zip(rotated.bounds().iter()))
        {
            worst_scale = worst_scale.max(rel(c * x, *y));
            worst_unitary = worst_unitary.max(rel(*x, *z));
        }
    }
    outcome(
        worst_scale <= 1e-9 && worst_unitary <= 1e-9,
        format!("100 triples, max scale error {worst_scale:.2e}, max rotation error {worst_unitary:.2e}"),
    )
}

fn oracle_cross_validation(run: &SuiteRun) -> Outcome {
    let mut rng = SplitMix64::new(0x0_5ac1e);
    let mut worst: f64 = 0.0;
    for k in 0..500 {
        let n = 2 + k % 2;
        let family = if k % 4 < 2 { Family::UniformRandom } else { Family::ComplexRandom };
        let a = generate_trial(&EnsembleSpec::new(family, n, 1, rng.next_u64()), 0).unwrap();
        let g = a.gram();
        let jac = jacobi_eigenvalues(&g, 1e-15, 100).unwrap();
        let closed = charpoly_eigen_bruteforce(&g).unwrap();
        for (x, y) in jac.eigenvalues_of_gram.iter().zip(&closed.eigenvalues_of_gram) {
            worst = worst.max(rel(*x, *y));
        }
    }
    let cfg = SolverConfig::default();
    let mut identity_failures = 0;
    for (label, r) in &run.reports {
        for c in invariant_checks(r, &cfg) {
            if c.name.starts_with("spectrum:") && !c.pass {
                if identity_failures < 5 {
                    println!("      {label}: {} ({})", c.name, c.detail);
                }
                identity_failures += 1;
            }
        }
    }
    outcome(
        worst <= 1e-9 && identity_failures == 0 && run.errors.is_empty(),
        format!(
            "500 Gram matrices, max eigenvalue disagreement {worst:.2e}; {identity_failures} spectral identity \
             failures over {} suite matrices",
            run.reports.len()
        ),
    )
}

fn bits(m: &Matrix) -> Vec<(u64, u64)> {
    m.entries().iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect()
}

fn io_round_trip() -> Outcome {
    let mut rng = SplitMix64::new(0x10);
    let mut mismatches = 0;
    for k in 0..100 {
        let n = 1 + k % 6;
        let complex = k % 3 == 0;
        let entries: Vec<Complex64> = (0..n * n)
            .map(|_| {
                // spread exponents over many binades
                let re = rng.symmetric() * 10f64.powi((rng.small_int() * 30) as i32);
                let im = if complex { rng.symmetric() * 10f64.powi(rng.small_int() as i32) } else { 0.0 };
                Complex64::new(re, im)
            })
            .collect();
        let m = Matrix::new(n, entries).unwrap();
        if bits(&parse_matrix_market(&to_matrix_market(&m)).unwrap()) != bits(&m) {
            mismatches += 1;
        }
        if bits(&parse_csv(&to_csv(&m)).unwrap()) != bits(&m) {
            mismatches += 1;
        }
    }

    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut fixture_mismatches = Vec::new();
    for (name, literal) in [("example1", example1()), ("example2", example2()), ("example3", example3())] {
        let csv = parse_csv(&std::fs::read_to_string(dir.join(format!("{name}.csv"))).unwrap()).unwrap();
        let mtx = parse_matrix_market(&std::fs::read_to_string(dir.join(format!("{name}.mtx"))).unwrap()).unwrap();
        if bits(&csv) != bits(&literal) {
            fixture_mismatches.push(format!("{name}.csv"));
        }
        if bits(&mtx) != bits(&literal) {
            fixture_mismatches.push(format!("{name}.mtx"));
        }
    }
    outcome(
        mismatches == 0 && fixture_mismatches.is_empty(),
        format!(
            "100 matrices x 2 formats, {mismatches} round-trip mismatches; fixture mismatches: {:?}",
            fixture_mismatches
        ),
    )
}

fn main() -> ExitCode {
    let run = run_suite();
    let criteria: Vec<(&str, Outcome)> = vec![
        ("example 1 reproduction", example_1()),
        ("example 2 reproduction", example_2()),
        ("example 3 reproduction", example_3()),
        ("chain property suite", chain_suite(&run)),
        ("n = 2 exactness", n2_exactness()),
        ("fixed-point and root residuals", residual_suite(&run)),
        ("scale covariance and unitary invariance", covariance_and_invariance()),
        ("oracle cross-validation", oracle_cross_validation(&run)),
        ("I/O round-trip", io_round_trip()),
    ];
    let mut failed = 0;
    for (name, o) in &criteria {
        println!("[{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.summary);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
