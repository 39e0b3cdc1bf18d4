//! `confocal`: generate discrete confocal nets, run the verification suites,
//! export layer meshes and focal curves, and check IC-nets.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage or parameter error,
//! 3 I/O error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use confocal_core::lattice::Window;

#[derive(Parser, Debug)]
#[command(name = "confocal", version, about = "Discrete confocal quadrics: nets, identity suites, meshes, IC-nets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate a discrete net (or sample a continuous one) and write it as JSON.
    Generate(GenerateArgs),
    /// Run the identity suites and write a JSON report.
    Verify(VerifyArgs),
    /// Export layer meshes, discrete conics and focal curves.
    Export(ExportArgs),
    /// Verify or solve IC-nets.
    Icnet(IcnetArgs),
}

#[derive(Args, Debug, Clone)]
struct SpectrumArgs {
    /// Integer spectrum α₁ > α₂ > … > α_N.
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    alphas: Option<Vec<i64>>,
    /// Window "lo:hi,lo:hi,…" in lattice units; defaults to the spectrum gaps.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<Window>,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(flatten)]
    spectrum: SpectrumArgs,
    /// Include the half-integer lattice as well.
    #[arg(long)]
    both_parities: bool,
    /// Sample the continuous net instead.
    #[arg(long, requires = "a")]
    continuous: bool,
    /// Continuous spectrum a₁ > … > a_N.
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    a: Option<Vec<f64>>,
    /// Samples per coordinate, e.g. 32x32.
    #[arg(long, default_value = "16")]
    grid: String,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    spectrum: SpectrumArgs,
    /// Verify a net JSON file instead of the closed form.
    #[arg(long, conflicts_with = "alphas")]
    net: Option<PathBuf>,
    /// Verify the continuous net with this spectrum.
    #[arg(long, requires = "a")]
    continuous: bool,
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    a: Option<Vec<f64>>,
    /// Interior samples per coordinate for the continuous suite.
    #[arg(long, default_value_t = 6)]
    samples: usize,
    /// Add uniform noise of this amplitude to every tabulated value.
    #[arg(long)]
    perturb: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override a tolerance, NAME=VALUE (repeatable).
    #[arg(long = "tolerance", value_name = "NAME=VALUE")]
    tolerances: Vec<String>,
    /// Run sweeps on the calling thread only.
    #[arg(long)]
    sequential: bool,
    /// Report path; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Obj,
    Json,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[command(flatten)]
    spectrum: SpectrumArgs,
    #[arg(long, conflicts_with = "alphas")]
    net: Option<PathBuf>,
    /// Layer "DIR:LEVEL" with 1-based direction and integer or half-integer level.
    #[arg(long, allow_hyphen_values = true)]
    layer: Vec<String>,
    /// Add the two adjacent dual layers of every surface layer.
    #[arg(long)]
    duals: bool,
    /// Reflect surface layers into all octants.
    #[arg(long)]
    reflect: bool,
    /// Export both focal curves (N = 3).
    #[arg(long)]
    focal: bool,
    #[arg(long, value_enum, default_value_t = Format::Obj)]
    format: Format,
    /// Output directory.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct IcnetArgs {
    /// Built-in grid: "rhombic".
    #[arg(long)]
    builtin: Option<String>,
    /// Lines per family of the built-in grid.
    #[arg(long, default_value_t = 9)]
    size: usize,
    /// Solve starting from this line-grid JSON (or from the built-in grid).
    #[arg(long, num_args = 0..=1, default_missing_value = "")]
    solve: Option<String>,
    /// Verify this line-grid JSON (or the built-in / solved grid).
    #[arg(long, num_args = 0..=1, default_missing_value = "")]
    verify: Option<String>,
    /// Solver tolerance on the max Pitot defect.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
    /// Shift every line parameter by uniform noise of this amplitude.
    #[arg(long)]
    perturb: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "tolerance", value_name = "NAME=VALUE")]
    tolerances: Vec<String>,
    /// Where to write the solved grid.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Report path; stdout when absent.
    #[arg(long)]
    report: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => commands::generate(a),
        Command::Verify(a) => commands::verify(a),
        Command::Export(a) => commands::export(a),
        Command::Icnet(a) => commands::icnet(a),
    };
    match result {
        Ok(code) => code.into(),
        Err(e) => {
            eprintln!("confocal: {e}");
            e.exit_code().into()
        }
    }
}
