//! `ncg` — exact verification reports for derivation-based calculi on the
//! generalized Kronecker algebra and the noncommutative torus.
//!
//! Every subcommand runs a named check suite from `ncg_core::verify` and
//! prints one JSON report envelope on stdout. Reports are deterministic:
//! identical inputs produce byte-identical output (sorted object keys,
//! canonical scalar strings, and a fixed sampling seed taken from the
//! `NCG_SEED` environment variable, default 0). The exit code is 0 iff
//! every check passes.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use ncg_core::calculus::Calculus;
use ncg_core::derivation::{LieSubalgebra, SubalgebraKind};
use ncg_core::form::{FormSpec, KHermitianForm};
use ncg_core::verify::{self, CheckResult};

#[derive(Parser)]
#[command(
    name = "ncg",
    version,
    about = "Exact verification reports for noncommutative differential calculi"
)]
struct Cli {
    /// Pretty-print the JSON report.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Algebra dimension, center, derivation ranks, bracket table, traces.
    KnInfo {
        /// Arrow count N (at least 1).
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
    },
    /// Shape of the first-order calculus for a derivation subalgebra.
    Calculus {
        /// Arrow count N (at least 1).
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        /// Derivation subalgebra.
        #[arg(long, value_parser = ["der", "inner", "tilde"])]
        g: String,
    },
    /// Solve the Levi-Civita problem for a hermitian form file.
    LcSolve {
        /// Arrow count N (at least 1).
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        /// Derivation subalgebra.
        #[arg(long, value_parser = ["der", "inner", "tilde"])]
        g: String,
        /// Path to a JSON form file (schema 1).
        #[arg(long)]
        form: PathBuf,
        /// Additionally require the star-connection condition.
        #[arg(long)]
        star: bool,
    },
    /// Noncommutative torus suites.
    Torus {
        #[command(subcommand)]
        cmd: TorusCommand,
    },
}

#[derive(Subcommand)]
enum TorusCommand {
    /// Verify the worked metric-connection examples.
    VerifyExamples,
    /// Cohomology dimensions on the [-K, K]² support window.
    Cohomology {
        /// Window half-width K (at least 1).
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        window: i64,
    },
}

/// The single report shape emitted by every subcommand.
#[derive(Serialize)]
struct ReportEnvelope {
    /// Subcommand that produced the report.
    command: String,
    /// Echo of the parsed parameters (including the sampling seed).
    inputs: Value,
    /// Named checks; `pass` means the residual is exactly zero.
    results: Vec<CheckResult>,
    /// Computed values (dimensions, solution families, cohomology).
    data: Value,
    /// Tool version.
    version: String,
}

impl ReportEnvelope {
    fn new(command: &str, inputs: Value, results: Vec<CheckResult>, data: Value) -> Self {
        Self {
            command: command.to_string(),
            inputs,
            results,
            data,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

fn seed_from_env() -> Result<u64> {
    match std::env::var("NCG_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .with_context(|| format!("NCG_SEED must be an unsigned integer, got `{s}`")),
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(e) => Err(e).context("NCG_SEED must be valid UTF-8"),
    }
}

fn run(cli: &Cli) -> Result<ReportEnvelope> {
    let seed = seed_from_env()?;
    Ok(match &cli.command {
        Command::KnInfo { n } => {
            let n = *n as usize;
            let (results, data) = verify::kn_info(n, seed);
            ReportEnvelope::new("kn-info", json!({ "n": n, "seed": seed }), results, data)
        }
        Command::Calculus { n, g } => {
            let n = *n as usize;
            let kind = SubalgebraKind::from_name(g).expect("validated by clap");
            let (results, data) = verify::calculus_suite(n, kind, seed);
            ReportEnvelope::new(
                "calculus",
                json!({ "g": g, "n": n, "seed": seed }),
                results,
                data,
            )
        }
        Command::LcSolve { n, g, form, star } => {
            let n = *n as usize;
            let kind = SubalgebraKind::from_name(g).expect("validated by clap");
            let cal = Calculus::new(LieSubalgebra::named(kind, n));
            let text = fs::read_to_string(form)
                .with_context(|| format!("reading form file `{}`", form.display()))?;
            let spec: FormSpec = serde_json::from_str(&text)
                .with_context(|| format!("parsing form file `{}`", form.display()))?;
            let h = KHermitianForm::from_spec(&cal, &spec)
                .with_context(|| format!("validating form file `{}`", form.display()))?;
            let (results, data) = verify::lc_solve_suite(&cal, &h, *star, seed);
            ReportEnvelope::new(
                "lc-solve",
                json!({
                    "form": form.display().to_string(),
                    "g": g,
                    "n": n,
                    "seed": seed,
                    "star": star,
                }),
                results,
                data,
            )
        }
        Command::Torus { cmd } => match cmd {
            TorusCommand::VerifyExamples => {
                let (results, data) = verify::torus_examples();
                ReportEnvelope::new("torus verify-examples", json!({ "seed": seed }), results, data)
            }
            TorusCommand::Cohomology { window } => {
                let (results, data) = verify::torus_cohomology_suite(*window)?;
                ReportEnvelope::new(
                    "torus cohomology",
                    json!({ "window": window }),
                    results,
                    data,
                )
            }
        },
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(envelope) => {
            let rendered = if cli.pretty {
                serde_json::to_string_pretty(&envelope)
            } else {
                serde_json::to_string(&envelope)
            }
            .expect("reports always serialize");
            println!("{rendered}");
            if verify::all_pass(&envelope.results) {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
