//! Batch front end: one subcommand per pipeline, JSON or CSV reports.
//!
//! Exit codes: 0 ok, 2 parse, 3 math-domain, 4 precondition, 5 self-validation failure.

pub mod commands;
pub mod inputs;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use crinv::Error;
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug, Clone)]
#[command(name = "crinv", version, about = "Exact CR invariants of strictly pseudoconvex hypersurfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Fefferman's approximate Monge–Ampère solution and its obstruction.
    Fefferman,
    /// Ambient metric of the Fefferman defining function.
    BuildAmbient,
    /// Q′, Q, P′f, Pf and S₁ for e^Υ θ, from both the ambient and the Tanaka–Webster engines.
    Invariants,
    /// Curvature terms and Q′ at the origin for the scaling family on the model.
    ModelTable,
    /// Renormalized volume integrals of the ball and the extracted total Q′.
    TotalQprime,
    /// Self-adjointness residuals of P′ and P on the sphere.
    Selfadjoint,
    /// Whether a function on a rigid surface is CR pluriharmonic.
    PluriharmonicTest,
    /// Cartan curvature of e^Υ θ and its double divergence.
    Cartan,
}

#[derive(ValueEnum, Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Options {
    /// Surface JSON file, or `quadric`, `ball` (optionally `:n`).
    #[arg(long, global = true)]
    pub surface: Option<String>,
    /// Scaling Υ: holomorphic-terms JSON (used as 2 Re) or a real series JSON in base variables.
    #[arg(long, global = true)]
    pub upsilon: Option<PathBuf>,
    /// Test function, in the same formats as --upsilon.
    #[arg(long, global = true)]
    pub f: Option<PathBuf>,
    /// Truncation degree for built-in surfaces, or an override for surface files.
    #[arg(long, global = true)]
    pub trunc: Option<u32>,
    /// Comma-separated rationals for model-table.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Log-spaced ε grid `lo:hi:count`.
    #[arg(long, global = true)]
    pub eps_grid: Option<String>,
    /// Quadrature resolution.
    #[arg(long, global = true)]
    pub resolution: Option<usize>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Refuse non-pluriharmonic scalings.
    #[arg(long, global = true)]
    pub require_pseudo_einstein: bool,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => 2,
        Error::Domain(_) => 3,
        Error::Precondition(_) | Error::Mismatch(_) => 4,
        Error::Validation(_) => 5,
    }
}

/// Output text and whether every self-validation check passed.
pub struct Outcome {
    pub text: String,
    pub ok: bool,
}

pub fn run(cli: &Cli) -> crinv::Result<Outcome> {
    commands::dispatch(cli.command, &cli.opts)
}
