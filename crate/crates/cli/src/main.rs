//! `hierdepth`: depth computations, transform checks and evaluation codes.
//!
//! JSON reports go to stdout, diagnostics to stderr. Exit status is 0 on
//! success (including "no filtration" and "infeasible" answers), 1 on
//! malformed input and 2 on domain errors.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use hierdepth::Lattice;

const DEFAULT_SEED: u64 = 20_240_607;

#[derive(Debug)]
pub enum CliError {
    Input { field: String, message: String },
    Domain(hierdepth::Error),
}

impl From<hierdepth::Error> for CliError {
    fn from(e: hierdepth::Error) -> Self {
        CliError::Domain(e)
    }
}

#[derive(Parser)]
#[command(name = "hierdepth", version, about = "Hierarchical depth, elementary transforms and evaluation codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Depth of a split bundle on a curve, P2 or P1xP1
    Depth(DepthArgs),
    /// Exact depth on a blowup from the depth on the minimal model
    MmpDepth(MmpArgs),
    /// Check that two elementary transforms commute
    HeckeVerify(HeckeArgs),
    /// Build a filtration of a split bundle on P1 by explicit transforms
    Filtration(FiltrationArgs),
    /// Build an evaluation code from a config file
    CodeBuild(CodeBuildArgs),
    /// Dimension, minimum distance and zero blocks of a code
    CodeAnalyze(CodeArgs),
    /// Compare normalized distances before and after contraction
    MmpCompare(CodeArgs),
}

#[derive(Args)]
struct DepthArgs {
    /// Shorthand for `--lattice curve`
    #[arg(long, conflicts_with = "lattice")]
    curve: bool,
    /// curve, P2 or P1xP1
    #[arg(long)]
    lattice: Option<String>,
    /// Summand degrees (curve or P2)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    degrees: Option<Vec<i64>>,
    /// Bundle such as `O(2F1)+O(F2)`
    #[arg(long)]
    bundle: Option<String>,
    /// Normalization class
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    lambda0: String,
}

#[derive(Args)]
struct MmpArgs {
    #[arg(long)]
    hmin: i64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "")]
    alpha: Vec<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "")]
    beta: Vec<String>,
}

#[derive(Args)]
struct HeckeArgs {
    #[arg(long)]
    field: u64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    degrees: Vec<i64>,
    /// Two points: integers mod p or `inf`
    #[arg(long, value_delimiter = ',', required_unless_present = "random")]
    points: Vec<String>,
    /// Two covectors, e.g. `1,0;0,1` (default: first and second unit vectors)
    #[arg(long)]
    covectors: Option<String>,
    /// Twist of the section model (default 0)
    #[arg(long)]
    twist: Option<i64>,
    /// Run this many random instances instead
    #[arg(long, conflicts_with_all = ["points", "covectors", "twist", "degrees"])]
    random: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args)]
struct FiltrationArgs {
    #[arg(long)]
    field: u64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    degrees: Vec<i64>,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    lambda0: i64,
}

#[derive(Args)]
struct CodeBuildArgs {
    #[arg(long)]
    config: String,
    /// `json` report or `text` generator rows
    #[arg(long, default_value = "json", value_parser = ["json", "text"])]
    format: String,
}

#[derive(Args)]
struct CodeArgs {
    #[arg(long)]
    config: String,
    /// Overrides the config budget
    #[arg(long)]
    budget: Option<u64>,
}

fn parse_ints(values: &[String], name: &str) -> Result<Vec<i64>, CliError> {
    values
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.trim().parse::<i64>().map_err(|e| CliError::Input {
                field: name.to_string(),
                message: e.to_string(),
            })
        })
        .collect()
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(value).expect("reports serialize") + "\n")
}

fn run(cli: Cli) -> Result<String, CliError> {
    use commands as c;
    match cli.command {
        Command::Depth(a) => {
            let lattice = match (&a.lattice, a.curve) {
                (Some(l), _) => l.parse::<Lattice>().map_err(|e| CliError::Input {
                    field: "--lattice".into(),
                    message: e.to_string(),
                })?,
                (None, _) => Lattice::Curve,
            };
            json(&c::depth(lattice, a.degrees.as_deref(), a.bundle.as_deref(), &a.lambda0)?)
        }
        Command::MmpDepth(a) => {
            let alpha = parse_ints(&a.alpha, "--alpha")?;
            let beta = parse_ints(&a.beta, "--beta")?;
            json(&c::mmp_depth(a.hmin, &alpha, &beta)?)
        }
        Command::HeckeVerify(a) => match a.random {
            Some(n) => json(&c::hecke_random(a.field, n, a.seed)?),
            None => json(&c::hecke_verify(&c::HeckeArgs {
                p: a.field,
                degrees: &a.degrees,
                points: &a.points,
                covectors: a.covectors.as_deref(),
                twist: a.twist,
            })?),
        },
        Command::Filtration(a) => json(&c::filtration(a.field, &a.degrees, a.lambda0)?),
        Command::CodeBuild(a) => {
            let cfg = c::load_config(&a.config)?;
            match c::code_build(&cfg, a.format == "text")? {
                c::CodeBuildOutput::Json(r) => json(&r),
                c::CodeBuildOutput::Text(t) => Ok(t.trim_end().to_string() + "\n"),
            }
        }
        Command::CodeAnalyze(a) => {
            let cfg = c::load_config(&a.config)?;
            json(&c::code_analyze(&cfg, a.budget)?)
        }
        Command::MmpCompare(a) => {
            let cfg = c::load_config(&a.config)?;
            json(&c::mmp_compare(&cfg, a.budget)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let rendered = e.to_string();
            eprintln!("{}", rendered.lines().next().unwrap_or("error: malformed arguments"));
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Input { field, message }) => {
            eprintln!("error: {field}: {message}");
            ExitCode::from(1)
        }
        Err(CliError::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
