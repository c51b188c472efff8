//! `jframe`: analyze families, operators and subspaces of a finite-dimensional
//! Krein space described in a JSON problem file.
//!
//! Exit codes: 0 when the tested property holds, 2 when it does not, 1 on
//! usage, input or numerical errors.

mod commands;
mod output;
mod problem;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use krein_frames::{Error, Tolerances};

use commands::{Options, Outcome};
use problem::ProblemFile;

#[derive(Debug, Parser)]
#[command(name = "jframe", version, about = "J-frames and J-frame operators in finite-dimensional Krein spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Tolerance override, repeatable: a bare number sets the rank, neutral
    /// and definiteness thresholds; `name=value` sets one of rank, neutral,
    /// definite, psd, residual, angle, subspace, structure.
    #[arg(long, global = true, value_name = "TOL")]
    tol: Vec<String>,

    /// Also estimate the cone angle by sampling with N samples.
    #[arg(long, global = true, value_name = "N")]
    oracle: Option<usize>,

    /// Seed for probe vectors and sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the machine-readable report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,

    /// Suppress the text report.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Test a family for the J-frame property and report its bounds and operators.
    Analyze { file: PathBuf },
    /// Test whether S is a J-frame operator, using any supplied witnesses.
    CheckOperator {
        file: PathBuf,
        /// Build a J-frame from the witnesses S1, S2 and write it as a family file (`-` for stdout).
        #[arg(long, value_name = "OUT")]
        synthesize: Option<PathBuf>,
    },
    /// Minimal angle between a subspace and the neutral cone.
    Angle { file: PathBuf },
    /// Same as `check-operator --synthesize OUT`.
    Synthesize {
        file: PathBuf,
        #[arg(short, long, value_name = "OUT", default_value = "-")]
        out: PathBuf,
    },
}

fn tolerances(specs: &[String]) -> Result<Tolerances> {
    let mut tol = Tolerances::default();
    for spec in specs {
        match spec.split_once('=') {
            Some((name, value)) => {
                let v: f64 = value.trim().parse().with_context(|| format!("--tol {spec}: bad number"))?;
                if !(v > 0.0 && v.is_finite()) {
                    bail!("--tol {spec}: tolerance must be positive");
                }
                if !tol.set(name.trim(), v) {
                    bail!("--tol {spec}: unknown tolerance \"{name}\"");
                }
            }
            None => {
                let v: f64 = spec.trim().parse().with_context(|| format!("--tol {spec}: bad number"))?;
                if !(v > 0.0 && v.is_finite()) {
                    bail!("--tol {spec}: tolerance must be positive");
                }
                tol = tol.with_base(v);
            }
        }
    }
    Ok(tol)
}

fn run(cli: &Cli) -> Result<Outcome> {
    let opts = Options { tol: tolerances(&cli.tol)?, oracle: cli.oracle, seed: cli.seed };
    match &cli.command {
        Command::Analyze { file } => commands::analyze(&ProblemFile::load(file)?, &opts),
        Command::CheckOperator { file, synthesize } => {
            commands::check_operator(&ProblemFile::load(file)?, &opts, synthesize.as_deref())
        }
        Command::Angle { file } => commands::angle(&ProblemFile::load(file)?, &opts),
        Command::Synthesize { file, out } => commands::check_operator(&ProblemFile::load(file)?, &opts, Some(out)),
    }
}

/// Library errors that answer the question negatively rather than signal
/// bad input.
fn is_domain_negative(e: &anyhow::Error) -> bool {
    matches!(
        e.downcast_ref::<Error>(),
        Some(
            Error::NeutralVector { .. }
                | Error::NotAJFrame(_)
                | Error::NotAFrame(_)
                | Error::NotSurjective(_)
                | Error::Geometry(_)
                | Error::Operator(_)
                | Error::Classification(_)
        )
    )
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(if is_domain_negative(&e) { 2 } else { 1 });
        }
    };
    if let Some(path) = &cli.json {
        let body = output::render(&outcome.json);
        if let Err(e) = fs::write(path, body) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    match &outcome.emitted {
        Some(body) => {
            print!("{body}");
            if !cli.quiet {
                eprint!("{}", outcome.text);
            }
        }
        None if !cli.quiet => print!("{}", outcome.text),
        None => {}
    }
    ExitCode::from(if outcome.pass { 0 } else { 2 })
}
