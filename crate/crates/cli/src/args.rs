use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::parse;

/// Largest accepted grid side for field construction and the flux lattice.
pub const MAX_GRID: usize = 256;

#[derive(Debug, Parser)]
#[command(name = "dirac3t", version, about = "Spectra, spectral flow and spectral sections of Spin^c Dirac operators on the flat 3-torus")]
pub struct Cli {
    /// Worker thread cap.
    #[arg(long, global = true, env = "DIRAC3T_THREADS")]
    pub threads: Option<usize>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues with multiplicities and branch labels up to |value| ≤ cutoff.
    Spectrum(SpectrumArgs),
    /// Spectral flow along the loop α(t) = 2πt·a.
    Flow(FlowArgs),
    /// Index element: pairings of k̂ with the generators of ℓ.
    Index(LatticeArgs),
    /// Whether spectral sections exist over ℓ.
    Exists(LatticeArgs),
    /// Minimal system of infinitesimal spectral sections.
    Classify(LatticeArgs),
    #[command(subcommand)]
    Sections(SectionsCommand),
    #[command(subcommand)]
    Verify(VerifyCommand),
}

fn grid(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|_| format!("{s:?} is not a grid size"))?;
    if n == 0 || n > MAX_GRID {
        return Err(format!("grid must be between 1 and {MAX_GRID}"));
    }
    Ok(n)
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long, value_parser = parse::ivec3, allow_hyphen_values = true)]
    pub khat: [i64; 3],
    #[arg(long, value_parser = parse::rvec3, allow_hyphen_values = true, default_value = "0,0,0")]
    pub alpha: [f64; 3],
    #[arg(long, value_parser = parse::real, allow_hyphen_values = true)]
    pub cutoff: f64,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[arg(long, value_parser = parse::ivec3, allow_hyphen_values = true)]
    pub khat: [i64; 3],
    #[arg(long = "loop", value_parser = parse::ivec3, allow_hyphen_values = true)]
    pub loop_vector: [i64; 3],
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    #[arg(long, value_parser = parse::ivec3, allow_hyphen_values = true)]
    pub khat: [i64; 3],
    /// Generators of ℓ, e.g. "1,0,0;0,1,0".
    #[arg(long, value_parser = parse::lattice, allow_hyphen_values = true)]
    pub lattice: parse::Generators,
}

#[derive(Debug, Subcommand)]
pub enum SectionsCommand {
    /// Build and verify the projector fields of one spectral section.
    Build(BuildArgs),
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub target: LatticeArgs,
    #[arg(long = "R", value_parser = parse::real, allow_hyphen_values = true)]
    pub radius: f64,
    /// Trivial k̂: degrees per coset, e.g. "0:1,1:-2"; unlisted cosets get 0.
    #[arg(long, value_parser = parse::degrees, allow_hyphen_values = true, conflicts_with_all = ["rank", "chern"])]
    pub degrees: Option<parse::DegreeMap>,
    #[arg(long, allow_hyphen_values = true)]
    pub rank: Option<i64>,
    #[arg(long, allow_hyphen_values = true, requires = "rank")]
    pub chern: Option<i64>,
    #[arg(long, value_parser = grid, default_value = "64")]
    pub grid: usize,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Flux-lattice oracle against the Landau levels 2πh‖k‖n.
    Landau(LandauArgs),
    /// Numerical eigensolves of random 2×2 mode blocks.
    Blocks(BlocksArgs),
    /// Numerical spectral flow against ⟨k̂, a⟩.
    Flow(FlowArgs),
}

#[derive(Debug, Args)]
pub struct LandauArgs {
    #[arg(long)]
    pub h: i64,
    #[arg(long, value_parser = grid)]
    pub grid: usize,
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
    #[arg(long = "norm-k", value_parser = parse::real, default_value = "1")]
    pub norm_k: f64,
}

#[derive(Debug, Args)]
pub struct BlocksArgs {
    #[arg(long, default_value_t = 10_000)]
    pub count: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}
