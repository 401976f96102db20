//! Command-line front end: instance generation, searches, estimates and
//! verification batches with machine-readable reports.
//!
//! Exit codes: 0 success, 1 theorem violation found, 2 input error,
//! 3 cap exceeded.

use std::fs;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::box_calculus::{BoxSpec, WeightTuple};
use crate::error::Error;
use crate::exponents::{
    estimate_exponent, trace_csv, ExponentEstimate, ExponentKind, ExponentValue, GridSpec,
    MatrixSide,
};
use crate::instances::{
    mahler_instances, mult_instances, parse_theta_json, Preset, DEFAULT_PRODUCT_TARGET,
};
use crate::lattice::{find_dual_point, find_primal_point, LatticePoint, TargetMatrix, DEFAULT_CAP};
use crate::theorems::{
    check_mahler_with_constant, check_mult_transference_with_constant, check_proof_chain,
    dyson_rhs, mahler_constant, mult_constant, Verdict,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// Environment variable overriding the default enumeration cap.
pub const CAP_ENV: &str = "TRANSFERENCE_CAP";

#[derive(Parser)]
#[command(
    name = "transference",
    about = "Lattice searches, exponent estimates and transference-theorem verification"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search a weighted box for a nonzero lattice point.
    Search(SearchArgs),
    /// Verify a transference theorem on generated instances.
    Verify(VerifyArgs),
    /// Estimate Diophantine exponents and emit the trace.
    Exponent(ExponentArgs),
}

#[derive(Args)]
struct SearchArgs {
    /// Matrix JSON file: {"m": .., "n": .., "theta": [[..], ..]}.
    #[arg(long)]
    theta: PathBuf,
    /// Comma-separated λ weights (length m).
    #[arg(long)]
    lambda: String,
    /// Comma-separated μ weights (length n).
    #[arg(long)]
    mu: String,
    /// Search the dual lattice instead of the primal one.
    #[arg(long)]
    dual: bool,
    /// Demand a nonzero first block.
    #[arg(long)]
    require_nonzero_x: bool,
    #[arg(long)]
    cap: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoremName {
    Mahler,
    Mult,
    Chain,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    theorem: TheoremName,
    #[arg(long, default_value_t = 100)]
    instances: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Multiply the transference constant by this factor (negative control).
    #[arg(long, default_value_t = 1.0)]
    sabotage: f64,
    #[arg(long)]
    cap: Option<u64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Ordinary,
    Multiplicative,
    Both,
}

#[derive(Args)]
struct ExponentArgs {
    /// Matrix JSON file (mutually exclusive with --preset).
    #[arg(long, conflicts_with = "preset")]
    theta: Option<PathBuf>,
    /// Named preset: sqrt23-row, sqrt23-col, rational-row, zero-row.
    #[arg(long)]
    preset: Option<String>,
    /// Grid as t0=..,ratio=..,steps=..
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, default_value_t = 4)]
    tail_window: usize,
    /// Step count for the (costlier) multiplicative grid.
    #[arg(long)]
    mult_steps: Option<usize>,
    #[arg(long, value_enum, default_value_t = KindArg::Both)]
    kind: KindArg,
    /// Write the trace CSV here.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    cap: Option<u64>,
}

fn default_cap() -> u64 {
    std::env::var(CAP_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_CAP)
}

fn timestamp_ms() -> u128 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match cli.command {
        Command::Search(args) => run_search(args),
        Command::Verify(args) => run_verify(args),
        Command::Exponent(args) => run_exponent(args),
    }
}

fn parse_weights(text: &str) -> Result<WeightTuple, String> {
    let values: Result<Vec<f64>, _> = text.split(',').map(|v| v.trim().parse::<f64>()).collect();
    let values = values.map_err(|e| format!("bad weight list {text:?}: {e}"))?;
    WeightTuple::new(values).map_err(|e| e.to_string())
}

fn load_theta(path: &PathBuf) -> Result<TargetMatrix, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_theta_json(&text).map_err(|e| e.to_string())
}

fn input_error(msg: &str) -> i32 {
    eprintln!("error: {msg}");
    EXIT_INPUT
}

#[derive(Serialize)]
struct SearchOutput {
    timestamp_ms: u128,
    lattice: &'static str,
    found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<LatticePoint>,
}

fn run_search(args: SearchArgs) -> i32 {
    let theta = match load_theta(&args.theta) {
        Ok(t) => t,
        Err(e) => return input_error(&e),
    };
    let lambda = match parse_weights(&args.lambda) {
        Ok(w) => w,
        Err(e) => return input_error(&e),
    };
    let mu = match parse_weights(&args.mu) {
        Ok(w) => w,
        Err(e) => return input_error(&e),
    };
    let bx = match BoxSpec::new(lambda, mu) {
        Ok(b) => b,
        Err(e) => return input_error(&e.to_string()),
    };
    let cap = args.cap.unwrap_or_else(default_cap);
    let result = if args.dual {
        find_dual_point(&theta, &bx, args.require_nonzero_x, cap)
    } else {
        find_primal_point(&theta, &bx, args.require_nonzero_x, cap)
    };
    match result {
        Ok(witness) => {
            let out = SearchOutput {
                timestamp_ms: timestamp_ms(),
                lattice: if args.dual { "dual" } else { "primal" },
                found: witness.is_some(),
                witness,
            };
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            EXIT_OK
        }
        Err(Error::CapExceeded { volume, cap }) => {
            eprintln!("error: enumeration volume {volume:.3e} exceeds cap {cap}");
            EXIT_CAP
        }
        Err(e) => input_error(&e.to_string()),
    }
}

#[derive(Serialize)]
struct ViolationEntry {
    instance_index: usize,
    steps: Vec<crate::theorems::Step>,
}

#[derive(Serialize)]
struct VerifyOutput {
    timestamp_ms: u128,
    theorem: String,
    instances: usize,
    seed: u64,
    sabotage: f64,
    product_target: f64,
    verified: usize,
    vacuous: usize,
    inconclusive: usize,
    violations: Vec<ViolationEntry>,
}

fn run_verify(args: VerifyArgs) -> i32 {
    let cap = args.cap.unwrap_or_else(default_cap);
    let mut out = VerifyOutput {
        timestamp_ms: timestamp_ms(),
        theorem: match args.theorem {
            TheoremName::Mahler => "mahler".into(),
            TheoremName::Mult => "mult".into(),
            TheoremName::Chain => "chain".into(),
        },
        instances: args.instances,
        seed: args.seed,
        sabotage: args.sabotage,
        product_target: DEFAULT_PRODUCT_TARGET,
        verified: 0,
        vacuous: 0,
        inconclusive: 0,
        violations: Vec::new(),
    };

    let mut run = || -> Result<(), Error> {
        match args.theorem {
            TheoremName::Mahler => {
                for inst in mahler_instances(args.instances, args.seed)? {
                    let c = mahler_constant(inst.bx.d()) * args.sabotage;
                    let report = check_mahler_with_constant(&inst.theta, &inst.bx, c, cap)?;
                    tally(&mut out, inst.seed_index, report);
                }
            }
            TheoremName::Mult => {
                for inst in mult_instances(args.instances, args.seed)? {
                    let c1 = mult_constant(inst.mu.len()) * args.sabotage;
                    let report = check_mult_transference_with_constant(
                        &inst.theta,
                        &inst.lambda,
                        &inst.mu,
                        c1,
                        cap,
                    )?;
                    tally(&mut out, inst.seed_index, report);
                }
            }
            TheoremName::Chain => {
                for inst in mult_instances(args.instances, args.seed)? {
                    match check_proof_chain(&inst.theta, &inst.lambda, &inst.mu, cap) {
                        Ok(report) => tally(&mut out, inst.seed_index, report),
                        Err(Error::TrivialBranch) => {
                            // min λ ≥ 1 reduces to the classical theorem.
                            let report = check_mult_transference_with_constant(
                                &inst.theta,
                                &inst.lambda,
                                &inst.mu,
                                mult_constant(inst.mu.len()) * args.sabotage,
                                cap,
                            )?;
                            tally(&mut out, inst.seed_index, report);
                        }
                        Err(e) => return Err(e),
                    }
                }
            }
        }
        Ok(())
    };

    if let Err(e) = run() {
        return input_error(&e.to_string());
    }

    let text = serde_json::to_string_pretty(&out).unwrap();
    match &args.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                return input_error(&format!("{}: {e}", path.display()));
            }
        }
        None => println!("{text}"),
    }
    if out.violations.is_empty() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}

fn tally(out: &mut VerifyOutput, index: usize, report: crate::theorems::VerificationReport) {
    match report.verdict {
        Verdict::Verified => out.verified += 1,
        Verdict::Vacuous => out.vacuous += 1,
        Verdict::Inconclusive => out.inconclusive += 1,
        Verdict::Violation => out.violations.push(ViolationEntry {
            instance_index: index,
            steps: report.steps,
        }),
    }
}

#[derive(Serialize)]
struct EstimateOutput {
    kind: &'static str,
    side: &'static str,
    estimate: Option<f64>,
    infinite: bool,
}

#[derive(Serialize)]
struct DysonComparison {
    /// dyson_rhs evaluated at the Θ-side estimate; lower bound for the
    /// transpose-side exponent. Informational: finite-scale estimates can
    /// undershoot the true supremum.
    rhs_from_theta: Option<f64>,
    transpose_estimate: Option<f64>,
    consistent: Option<bool>,
}

#[derive(Serialize)]
struct ExponentOutput {
    timestamp_ms: u128,
    matrix: serde_json::Value,
    grid: GridSpec,
    mult_steps: usize,
    estimates: Vec<EstimateOutput>,
    dyson_ordinary: DysonComparison,
    dyson_multiplicative: DysonComparison,
}

fn parse_grid(text: &str, tail_window: usize) -> Result<GridSpec, String> {
    let mut grid = GridSpec {
        tail_window,
        ..GridSpec::default()
    };
    for part in text.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("bad grid component {part:?}"))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|e| format!("bad grid value {part:?}: {e}"))?;
        match key.trim() {
            "t0" => grid.t0 = value,
            "ratio" => grid.ratio = value,
            "steps" => grid.steps = value as usize,
            other => return Err(format!("unknown grid key {other:?}")),
        }
    }
    if grid.t0 <= 1.0 || grid.ratio <= 1.0 || grid.steps < grid.tail_window {
        return Err("grid needs t0 > 1, ratio > 1 and steps >= tail window".into());
    }
    Ok(grid)
}

fn estimate_value(est: &ExponentEstimate) -> (Option<f64>, bool) {
    match est.estimate {
        ExponentValue::Finite(v) => (Some(v), false),
        ExponentValue::Infinite => (None, true),
    }
}

fn run_exponent(args: ExponentArgs) -> i32 {
    let (theta, matrix_desc) = if let Some(id) = &args.preset {
        match Preset::parse(id) {
            Some(p) => (p.matrix(), serde_json::json!({ "preset": p.id() })),
            None => {
                let known: Vec<&str> = Preset::all().iter().map(|p| p.id()).collect();
                return input_error(&format!("unknown preset {id:?}; known: {known:?}"));
            }
        }
    } else if let Some(path) = &args.theta {
        match load_theta(path) {
            Ok(t) => {
                let desc = serde_json::json!({ "file": path.display().to_string() });
                (t, desc)
            }
            Err(e) => return input_error(&e),
        }
    } else {
        return input_error("one of --theta or --preset is required");
    };

    let grid = match &args.grid {
        Some(text) => match parse_grid(text, args.tail_window) {
            Ok(g) => g,
            Err(e) => return input_error(&e),
        },
        None => GridSpec {
            tail_window: args.tail_window,
            ..GridSpec::default()
        },
    };
    let mult_steps = args.mult_steps.unwrap_or_else(|| grid.steps.min(8));
    let mult_grid = GridSpec {
        steps: mult_steps,
        tail_window: args.tail_window.min(mult_steps),
        ..grid
    };
    let cap = args.cap.unwrap_or_else(default_cap);

    let transpose = theta.transpose();
    let mut jobs: Vec<(ExponentKind, MatrixSide, &TargetMatrix, &GridSpec)> = Vec::new();
    let want_ordinary = matches!(args.kind, KindArg::Ordinary | KindArg::Both);
    let want_mult = matches!(args.kind, KindArg::Multiplicative | KindArg::Both);
    if want_ordinary {
        jobs.push((ExponentKind::Ordinary, MatrixSide::Theta, &theta, &grid));
        jobs.push((
            ExponentKind::Ordinary,
            MatrixSide::ThetaTranspose,
            &transpose,
            &grid,
        ));
    }
    if want_mult {
        jobs.push((
            ExponentKind::Multiplicative,
            MatrixSide::Theta,
            &theta,
            &mult_grid,
        ));
        jobs.push((
            ExponentKind::Multiplicative,
            MatrixSide::ThetaTranspose,
            &transpose,
            &mult_grid,
        ));
    }

    let mut estimates = Vec::new();
    let mut csv = String::new();
    let mut by_key = std::collections::HashMap::new();
    for (kind, side, matrix, g) in jobs {
        match estimate_exponent(matrix, kind, side, g, cap) {
            Ok(est) => {
                let (value, infinite) = estimate_value(&est);
                by_key.insert((kind, side), (value, infinite));
                estimates.push(EstimateOutput {
                    kind: match kind {
                        ExponentKind::Ordinary => "ordinary",
                        ExponentKind::Multiplicative => "multiplicative",
                    },
                    side: match side {
                        MatrixSide::Theta => "theta",
                        MatrixSide::ThetaTranspose => "theta-transpose",
                    },
                    estimate: value,
                    infinite,
                });
                csv.push_str(&format!(
                    "# kind={:?} side={:?}\n{}",
                    kind,
                    side,
                    trace_csv(&est)
                ));
            }
            Err(err) => {
                eprintln!("error: {err}");
                return EXIT_CAP;
            }
        }
    }

    let dyson_for = |kind: ExponentKind| -> DysonComparison {
        let theta_side = by_key.get(&(kind, MatrixSide::Theta)).copied();
        let transpose_side = by_key.get(&(kind, MatrixSide::ThetaTranspose)).copied();
        match (theta_side, transpose_side) {
            (Some((Some(est), false)), Some((tr, tr_inf))) => {
                let rhs = dyson_rhs(est, theta.m(), theta.n());
                let consistent = if tr_inf {
                    Some(true)
                } else {
                    tr.map(|t| t >= rhs - 0.5)
                };
                DysonComparison {
                    rhs_from_theta: Some(rhs),
                    transpose_estimate: tr,
                    consistent,
                }
            }
            _ => DysonComparison {
                rhs_from_theta: None,
                transpose_estimate: transpose_side.and_then(|(v, _)| v),
                consistent: None,
            },
        }
    };

    let out = ExponentOutput {
        timestamp_ms: timestamp_ms(),
        matrix: matrix_desc,
        grid,
        mult_steps,
        estimates,
        dyson_ordinary: dyson_for(ExponentKind::Ordinary),
        dyson_multiplicative: dyson_for(ExponentKind::Multiplicative),
    };
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    if let Some(path) = &args.csv {
        if let Err(e) = fs::write(path, &csv) {
            return input_error(&format!("{}: {e}", path.display()));
        }
    } else {
        print!("{csv}");
    }
    EXIT_OK
}
