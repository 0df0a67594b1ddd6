//! Command-line front end: build states and operators, compute symmetry
//! data, run the conformance sweep, reconstruct states, emit moment
//! reports. All file I/O is canonical JSON; exit codes follow a fixed
//! taxonomy so scripts can dispatch on failures.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use ncvalue_core::conformance::{run_conformance, ConformanceConfig, ConformanceReport};
use ncvalue_core::evaluation::{moments, reconstruct_from_symdata, sampled_moments};
use ncvalue_core::io::{
    canonical_to_string, moment_report_to_value, parse_chart, parse_operator, parse_state,
    parse_symdata, physical_state_to_value, reconstruction_to_value, state_vector_to_value,
    symdata_to_value,
};
use ncvalue_core::operators::{identity, ladder, number, position_momentum};
use ncvalue_core::{normalize_ray, symdata_h, symdata_w, symdata_z, Chart, Error, Observable};

const EXIT_BREACH: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_SINGULAR: u8 = 4;
const EXIT_INCONSISTENT: u8 = 5;
const EXIT_NOT_HERMITIAN: u8 = 6;

#[derive(Parser)]
#[command(name = "ncvalue", version, about = "Noncommutative values of observables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report here instead of standard output
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the symmetry-data triplet of an operator at a state
    Symdata {
        /// Builder name (identity, ladder, ladder_dag, x, p, number) or a
        /// JSON operator file
        #[arg(long)]
        op: String,
        /// JSON state file
        #[arg(long)]
        state: String,
        #[arg(long, default_value = "H")]
        chart: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check the product-law identities against the matrix oracle
    Conformance {
        /// Dimensions to sweep, comma separated
        #[arg(long, default_value = "2,3,5,8,16", value_delimiter = ',')]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fault injection: shift every K entry of the left factor
        #[arg(long = "perturb-K", value_name = "EPS")]
        perturb_k: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Recover the state ray from an H-chart triplet of an invertible operator
    Reconstruct {
        #[arg(long)]
        op: String,
        /// JSON symmetry-data file
        #[arg(long)]
        symdata: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Von Neumann moments of a Hermitian operator at a state
    Moments {
        #[arg(long)]
        op: String,
        #[arg(long)]
        state: String,
        /// Highest moment order
        #[arg(long, short = 'K', default_value_t = 6)]
        order: usize,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        /// Demonstration only: append finite-shot estimates drawn from p_j
        #[arg(long)]
        shots: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parse(_) => EXIT_PARSE,
        Error::SingularOperator(_) | Error::ConvergenceFailure => EXIT_SINGULAR,
        Error::InconsistentData(_) => EXIT_INCONSISTENT,
        Error::NotHermitian => EXIT_NOT_HERMITIAN,
        _ => EXIT_DOMAIN,
    }
}

fn build_operator(spec: &str, dim: usize, hbar: f64) -> Result<Observable, Error> {
    match spec {
        "identity" => Ok(identity(dim, hbar)),
        "ladder" => Ok(ladder(dim, hbar)?.0),
        "ladder_dag" => Ok(ladder(dim, hbar)?.1),
        "x" => Ok(position_momentum(dim, hbar)?.0),
        "p" => Ok(position_momentum(dim, hbar)?.1),
        "number" => number(dim, hbar),
        path => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("{path}: {e}")))?;
            parse_operator(&text)
        }
    }
}

fn read_file(path: &str) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

fn emit(output: &OutputArgs, value: &serde_json::Value) -> Result<(), Error> {
    let text = canonical_to_string(value) + "\n";
    match &output.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Error::Parse(format!("{path}: {e}")))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn conformance_report_to_value(cfg: &ConformanceConfig, report: &ConformanceReport) -> serde_json::Value {
    json!({
        "dims": cfg.dims,
        "hbar": cfg.hbar,
        "trials": cfg.trials,
        "tolerance": cfg.tolerance,
        "seed": cfg.seed,
        "identities": report
            .identities
            .iter()
            .map(|r| json!({ "name": r.name, "max_residual": r.max_residual, "pass": r.pass }))
            .collect::<Vec<_>>(),
        "pass": report.pass,
    })
}

fn cmd_symdata(op: &str, state: &str, chart: &str, output: &OutputArgs) -> Result<u8, Error> {
    let s = parse_state(&read_file(state)?)?;
    let beta = build_operator(op, s.dim(), s.hbar())?;
    let chart = parse_chart(chart)?;
    let (sd, state_value) = match chart {
        Chart::HChart => (symdata_h(&beta, &s)?, state_vector_to_value(&s)),
        Chart::HomogeneousFs => (symdata_z(&beta, &s)?, state_vector_to_value(&s)),
        Chart::AffineFs => {
            let p = normalize_ray(&s)?;
            (symdata_w(&beta, &p)?, physical_state_to_value(&p))
        }
    };
    emit(output, &symdata_to_value(&sd, state_value))?;
    Ok(0)
}

fn cmd_conformance(cfg: &ConformanceConfig, output: &OutputArgs) -> Result<u8, Error> {
    let report = run_conformance(cfg)?;
    emit(output, &conformance_report_to_value(cfg, &report))?;
    Ok(if report.pass { 0 } else { EXIT_BREACH })
}

fn cmd_reconstruct(op: &str, symdata: &str, output: &OutputArgs) -> Result<u8, Error> {
    let sd = parse_symdata(&read_file(symdata)?)?;
    let beta = build_operator(op, sd.x().len(), sd.hbar())?;
    let rec = reconstruct_from_symdata(&beta, &sd)?;
    emit(output, &reconstruction_to_value(&rec))?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_moments(
    op: &str,
    state: &str,
    order: usize,
    tolerance: f64,
    shots: Option<usize>,
    seed: u64,
    output: &OutputArgs,
) -> Result<u8, Error> {
    let s = parse_state(&read_file(state)?)?;
    let beta = build_operator(op, s.dim(), s.hbar())?;
    let p = normalize_ray(&s)?;
    let report = moments(&beta, &p, order)?;
    let sampled = match shots {
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Some(sampled_moments(&beta, &p, order, n, &mut rng)?)
        }
        None => None,
    };
    emit(output, &moment_report_to_value(&report, sampled.as_deref()))?;
    let agree = report
        .exact
        .iter()
        .zip(&report.spectral)
        .all(|(e, sp)| (e - sp).abs() <= tolerance * sp.abs().max(1.0));
    Ok(if agree { 0 } else { EXIT_BREACH })
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Symdata { op, state, chart, output } => {
            cmd_symdata(&op, &state, &chart, &output)
        }
        Command::Conformance { dims, hbar, trials, tolerance, seed, perturb_k, output } => {
            let cfg = ConformanceConfig { dims, hbar, trials, tolerance, seed, perturb_k };
            cmd_conformance(&cfg, &output)
        }
        Command::Reconstruct { op, symdata, output } => cmd_reconstruct(&op, &symdata, &output),
        Command::Moments { op, state, order, tolerance, shots, seed, output } => {
            cmd_moments(&op, &state, order, tolerance, shots, seed, &output)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("ncvalue: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
