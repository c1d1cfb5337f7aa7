mod error;
mod report;

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use sigmin::{
    compute_all, generate_trial, invariant_checks, parse_csv, parse_matrix_market, to_matrix_market, BoundsReport,
    EnsembleSpec, Family, Matrix, SolverConfig,
};

use crate::error::{CliError, CliResult, EXIT_CHECK_FAILED, EXIT_OK, EXIT_SPEC};
use crate::report::{human_table, sig6, BoundsProjection, CheckEntry, ReportDocument, Timings, SCHEMA_VERSION};

/// Determinant-based lower bounds on the smallest singular value.
#[derive(Parser)]
#[command(name = "sigmin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute l, l0, l1, a and b for a matrix file.
    Compute {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Also compute σ_min exactly and report bound/σ_min ratios.
        #[arg(long)]
        oracle: bool,
        /// Print the fixed-point iterates.
        #[arg(long)]
        trace: bool,
        /// Emit a JSON report document instead of a table.
        #[arg(long)]
        machine: bool,
    },
    /// Run the bounds and the oracle over a random ensemble and write CSV.
    Sweep {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long)]
        scale: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every ordering and residual invariant against the oracle.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Write ensemble members as MatrixMarket files.
    Gen {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct EnsembleArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    trials: usize,
    #[arg(long)]
    seed: u64,
}

impl EnsembleArgs {
    fn spec(&self, kappa: Option<f64>, scale: Option<f64>) -> CliResult<EnsembleSpec> {
        let family: Family = self.family.parse()?;
        let spec = EnsembleSpec { kappa, scale, ..EnsembleSpec::new(family, self.n, self.trials, self.seed) };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Mm,
    Csv,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Mm => "matrix-market",
            Format::Csv => "csv",
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_SPEC } else { EXIT_OK });
        }
    };
    let outcome = match cli.command {
        Command::Compute { file, format, oracle, trace, machine } => cmd_compute(&file, format, oracle, trace, machine),
        Command::Sweep { ensemble, kappa, scale, out } => cmd_sweep(&ensemble, kappa, scale, out.as_deref()),
        Command::Verify { file, format } => cmd_verify(&file, format),
        Command::Gen { ensemble, out } => cmd_gen(&ensemble, &out),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("sigmin: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn micros(start: Instant) -> u128 {
    start.elapsed().as_micros()
}

struct Loaded {
    matrix: Matrix,
    descriptor: String,
    read_us: u128,
    parse_us: u128,
}

/// Reads and parses `path`. Without an explicit format, a `%%MatrixMarket`
/// banner selects MatrixMarket and anything else is read as CSV.
fn load(path: &Path, format: Option<Format>) -> CliResult<Loaded> {
    let start = Instant::now();
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let read_us = micros(start);
    let format = format.unwrap_or_else(|| {
        if text.trim_start().to_ascii_lowercase().starts_with("%%matrixmarket") {
            Format::Mm
        } else {
            Format::Csv
        }
    });
    let start = Instant::now();
    let matrix = match format {
        Format::Mm => parse_matrix_market(&text)?,
        Format::Csv => parse_csv(&text)?,
    };
    let parse_us = micros(start);
    let n = matrix.dim();
    let kind = if matrix.is_real() { "real" } else { "complex" };
    let descriptor = format!("{} ({}, {n}x{n}, {kind})", path.display(), format.name());
    Ok(Loaded { matrix, descriptor, read_us, parse_us })
}

fn cmd_compute(path: &Path, format: Option<Format>, oracle: bool, trace: bool, machine: bool) -> CliResult<u8> {
    let input = load(path, format)?;
    let cfg = SolverConfig::default();
    let start = Instant::now();
    let r = compute_all(&input.matrix, &cfg, oracle)?;
    let bounds_us = micros(start);

    if !machine {
        print!("{}", human_table(&input.descriptor, &r, trace));
        return Ok(EXIT_OK);
    }
    let start = Instant::now();
    let checks = invariant_checks(&r, &cfg);
    let checks_us = micros(start);
    let doc = ReportDocument {
        schema_version: SCHEMA_VERSION,
        input_descriptor: input.descriptor,
        bounds: BoundsProjection::new(&r, trace),
        checks: checks.iter().map(CheckEntry::from).collect(),
        timings: Timings { read_us: input.read_us, parse_us: input.parse_us, bounds_us, checks_us },
    };
    let json = serde_json::to_string_pretty(&doc).expect("report document serializes");
    println!("{json}");
    Ok(EXIT_OK)
}

fn cmd_verify(path: &Path, format: Option<Format>) -> CliResult<u8> {
    let input = load(path, format)?;
    let cfg = SolverConfig::default();
    let r = compute_all(&input.matrix, &cfg, true)?;
    let checks = invariant_checks(&r, &cfg);
    println!("matrix {}", input.descriptor);
    for c in &checks {
        println!("{} {:<44} slack {:+.3e}  {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.slack, c.detail);
    }
    for note in &r.notes {
        println!("note: {note}");
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    println!("{} checks, {failed} failed", checks.len());
    Ok(if failed == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
}

const SWEEP_HEADER: &str = "n,seed,trial,frob_sq,det_abs,l,l0,l1,a,b,sigma_min,iters,ordering_ok";

fn sweep_row(spec: &EnsembleSpec, trial: usize, r: &BoundsReport) -> String {
    let mut row = format!("{},{},{trial}", spec.n, spec.seed);
    let sigma = r.sigma_min.unwrap_or(f64::NAN);
    for x in [r.frob_sq, r.det_abs, r.l, r.l0, r.l1, r.a, r.b, sigma] {
        write!(row, ",{x:.16e}").unwrap();
    }
    write!(row, ",{},{}", r.b_trace.iterations() + r.b_trace.newton_steps, r.ordering_ok).unwrap();
    row
}

fn sweep_summary(reports: &[BoundsReport]) -> String {
    let mut out = String::new();
    writeln!(out, "# trials: {}", reports.len()).unwrap();
    writeln!(out, "# bound, mean bound/sigma_min, min bound/sigma_min").unwrap();
    for (k, name) in ["l", "l0", "l1", "a", "b"].iter().enumerate() {
        let ratios: Vec<f64> = reports.iter().filter_map(|r| r.sigma_min.map(|s| r.bounds()[k].1 / s)).collect();
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        writeln!(out, "# {name}, {}, {}", sig6(mean), sig6(min)).unwrap();
    }
    let violations = reports.iter().filter(|r| !r.ordering_ok).count();
    writeln!(out, "# chain violations: {violations}").unwrap();
    out
}

fn cmd_sweep(args: &EnsembleArgs, kappa: Option<f64>, scale: Option<f64>, out: Option<&Path>) -> CliResult<u8> {
    let spec = args.spec(kappa, scale)?;
    let cfg = SolverConfig::default();
    let reports = (0..spec.trials)
        .into_par_iter()
        .map(|trial| {
            let a = generate_trial(&spec, trial)?;
            compute_all(&a, &cfg, true)
        })
        .collect::<sigmin::Result<Vec<_>>>()?;

    let mut csv = String::new();
    writeln!(csv, "{SWEEP_HEADER}").unwrap();
    for (trial, r) in reports.iter().enumerate() {
        writeln!(csv, "{}", sweep_row(&spec, trial, r)).unwrap();
    }
    let summary = sweep_summary(&reports);
    csv.push_str(&summary);
    match out {
        Some(path) => {
            fs::write(path, &csv).map_err(|e| CliError::io(path, e))?;
            print!("{summary}");
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(csv.as_bytes()).map_err(|e| CliError::io("<stdout>", e))?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_gen(args: &EnsembleArgs, dir: &Path) -> CliResult<u8> {
    let spec = args.spec(None, None)?;
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    for trial in 0..spec.trials {
        let a = generate_trial(&spec, trial)?;
        let path = dir.join(format!("{}-{}-{}-{trial}.mtx", spec.family, spec.n, spec.seed));
        fs::write(&path, to_matrix_market(&a)).map_err(|e| CliError::io(&path, e))?;
        println!("{}", path.display());
    }
    Ok(EXIT_OK)
}
