//! The `merbit` command line: validation, benchmarking, sigma sweeps and the
//! two solver workloads over Matrix Market input.

pub mod commands;
pub mod error;
pub mod io;
pub mod record;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use merbit_core::format::{select_sigma, SimtConfig};
use merbit_core::Precision;

pub use error::{exit, CliError, CliResult};
pub use record::{BenchRecord, SolverRecord, SweepRecord, SCHEMA_VERSION};

#[derive(Debug, Parser)]
#[command(name = "merbit", version, about = "Merge-path SpMV with bit-field tile descriptors")]
pub struct Cli {
    /// Worker threads for the kernels (default: all cores).
    #[arg(long, global = true, env = "MERBIT_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cross-check kernels, path reconstruction and descriptors on a matrix.
    Validate(ValidateArgs),
    /// Time SpMV kernels and emit one record per kernel.
    Bench(BenchArgs),
    /// Benchmark MERBIT across a list of sigma values.
    SigmaSweep(SweepArgs),
    /// PageRank power iteration on a graph adjacency matrix.
    Pagerank(PagerankArgs),
    /// Solve A x = b with BiCGSTAB.
    Bicgstab(BicgstabArgs),
    /// Build tile metadata and store it as a binary cache.
    Convert(ConvertArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PrecisionArg {
    F32,
    F64,
}

impl From<PrecisionArg> for Precision {
    fn from(p: PrecisionArg) -> Self {
        match p {
            PrecisionArg::F32 => Precision::Single,
            PrecisionArg::F64 => Precision::Double,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct KernelOpts {
    #[arg(long, value_enum, default_value = "f64")]
    pub precision: PrecisionArg,
    /// Lanes per warp.
    #[arg(long)]
    pub omega: Option<u32>,
    /// Merge-path steps per lane (default: 14 for f32, 7 for f64).
    #[arg(long)]
    pub sigma: Option<u32>,
    /// Lanes per block, a multiple of omega (default: 8 warps).
    #[arg(long)]
    pub block_size: Option<u32>,
}

pub const DEFAULT_OMEGA: u32 = 32;

impl KernelOpts {
    pub fn precision(&self) -> Precision {
        self.precision.into()
    }

    pub fn config(&self) -> CliResult<SimtConfig> {
        self.config_with_sigma(self.sigma)
    }

    pub fn config_with_sigma(&self, sigma: Option<u32>) -> CliResult<SimtConfig> {
        let omega = self.omega.unwrap_or(DEFAULT_OMEGA);
        let sigma = select_sigma(self.precision(), sigma);
        let c = match self.block_size {
            Some(b) => SimtConfig::new(omega, sigma, b)?,
            None => SimtConfig::with_default_block(omega, sigma)?,
        };
        Ok(c)
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputOpts {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to a file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    pub matrix: PathBuf,
    #[command(flatten)]
    pub kernel: KernelOpts,
    /// Tile metadata cache to validate against the matrix.
    #[arg(long)]
    pub tile: Option<PathBuf>,
    /// Input vector, one value per line (default: seeded uniform in [-1, 1]).
    #[arg(long)]
    pub x: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the MERBIT output of the first configuration, one value per line.
    #[arg(long)]
    pub y_out: Option<PathBuf>,
    /// Report file (default stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TimingOpts {
    /// Timed SpMV iterations per kernel.
    #[arg(long, default_value_t = 400)]
    pub iters: usize,
    /// Untimed iterations before timing.
    #[arg(long, default_value_t = 10)]
    pub warmup: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    pub matrix: PathBuf,
    /// Comma separated kernels out of coo, csr, merge, merbit.
    #[arg(long, value_delimiter = ',', default_value = "coo,csr,merge,merbit")]
    pub kernels: Vec<String>,
    /// Dataset id in the records (default: file stem).
    #[arg(long)]
    pub dataset: Option<String>,
    #[command(flatten)]
    pub kernel: KernelOpts,
    #[command(flatten)]
    pub timing: TimingOpts,
    #[command(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    pub matrix: PathBuf,
    /// Sigma values, comma separated; ranges like 1-14 are accepted.
    #[arg(long, default_value = "1-14")]
    pub sigmas: String,
    #[arg(long)]
    pub dataset: Option<String>,
    #[command(flatten)]
    pub kernel: KernelOpts,
    #[command(flatten)]
    pub timing: TimingOpts,
    #[command(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Clone, Args)]
pub struct SolverOpts {
    /// SpMV kernel used inside the solver.
    #[arg(long, default_value = "merbit")]
    pub kernel: String,
    #[arg(long)]
    pub dataset: Option<String>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Write the solution vector here, one value per line.
    #[arg(long)]
    pub vector_out: Option<PathBuf>,
    #[command(flatten)]
    pub opts: KernelOpts,
    #[command(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Clone, Args)]
pub struct PagerankArgs {
    /// Adjacency matrix; a stored entry (i, j) is an edge i -> j.
    pub graph: PathBuf,
    #[arg(long, default_value_t = 0.85)]
    pub damping: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub err_tol: f64,
    #[arg(long, default_value_t = 210)]
    pub reference_iters: usize,
    #[command(flatten)]
    pub solver: SolverOpts,
}

#[derive(Debug, Clone, Args)]
pub struct BicgstabArgs {
    pub matrix: PathBuf,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Right-hand side, one value per line (default: b = A x with x seeded
    /// uniform in [-1, 1]).
    #[arg(long)]
    pub rhs: Option<PathBuf>,
    /// Replace every stored value by 1 before solving.
    #[arg(long)]
    pub unit_values: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub solver: SolverOpts,
}

#[derive(Debug, Clone, Args)]
pub struct ConvertArgs {
    pub matrix: PathBuf,
    /// Where to write the tile metadata cache.
    #[arg(long)]
    pub tile_out: PathBuf,
    /// Also write the matrix back as normalized Matrix Market.
    #[arg(long)]
    pub mtx_out: Option<PathBuf>,
    #[command(flatten)]
    pub kernel: KernelOpts,
}

/// Runs a parsed command, inside a sized thread pool when requested.
pub fn run(cli: &Cli) -> CliResult<()> {
    match cli.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Core(merbit_core::Error::InvalidArgument(e.to_string())))?;
            pool.install(|| commands::dispatch(&cli.command))
        }
        None => commands::dispatch(&cli.command),
    }
}
