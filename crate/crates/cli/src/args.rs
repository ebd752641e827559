//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "uwstbc",
    version,
    about = "Construct, search for and verify unitary-weight multi-group decodable space-time block codes"
)]
pub struct Cli {
    /// Write the run manifest here (default: next to `--out`, when given)
    #[arg(long, global = true, value_name = "PATH")]
    pub manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Emit the anti-hermitian Clifford basis of the 2^a x 2^a matrices
    GenerateBasis(BasisArgs),
    /// Enumerate every admissible Λ matrix for 2^a antennas
    EnumerateLambdas(LambdaArgs),
    /// Search for generating sets and reconstruct their codes
    Search(SearchArgs),
    /// Check a code for multi-group decodability, independence and more
    Verify(VerifyArgs),
    /// Worst-case decoding complexity order of a group signature
    Complexity(ComplexityArgs),
    /// Rerun the reference results end to end
    Repro(ReproArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisFormat {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Json,
    Count,
}

#[derive(Args, Debug)]
pub struct BasisArgs {
    /// Antenna exponent: matrices are 2^a x 2^a
    #[arg(long)]
    pub a: usize,
    /// Sign of j in the first generator
    #[arg(long, default_value = "+1", allow_hyphen_values = true, value_parser = ["+1", "-1", "1"])]
    pub sign_gamma1: String,
    #[arg(long, value_enum, default_value_t = BasisFormat::Json)]
    pub format: BasisFormat,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LambdaArgs {
    #[arg(long)]
    pub a: usize,
    #[arg(long, value_enum, default_value_t = Emit::Json)]
    pub emit: Emit,
    /// Permit the expensive a = 3 enumeration
    #[arg(long)]
    pub allow_a3: bool,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub workers: Workers,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long)]
    pub a: usize,
    /// Number of groups
    #[arg(long)]
    pub groups: usize,
    /// Group sizes, e.g. 2,2,4
    #[arg(long, value_name = "N1,N2,...")]
    pub sizes: Option<String>,
    /// Require equal group sizes
    #[arg(long)]
    pub symmetric: bool,
    /// Sweep signatures for the largest feasible rate
    #[arg(long)]
    pub max_rate: bool,
    /// Smallest group size considered by --max-rate
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub min_group_size: u64,
    /// Stop after this many generating sets
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub limit: Option<u64>,
    /// Fail instead of materialising more than this many sets when no --limit is given
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_results: u64,
    /// First weight matrix: `identity` or a JSON matrix file
    #[arg(long, default_value = "identity", value_name = "identity|PATH")]
    pub a1: String,
    /// Permit a = 3 candidate enumeration
    #[arg(long)]
    pub allow_a3: bool,
    /// Codes as a JSON list
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Search summary (signatures tried, maximum rate)
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub workers: Workers,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// JSON file holding a code or a list of codes, or builtin:table2 / builtin:table3
    #[arg(long, value_name = "PATH")]
    pub code: String,
    /// square:M or custom:<file>
    #[arg(long, value_name = "SPEC")]
    pub constellation: Option<String>,
    /// Also compute the coding gain (needs --constellation)
    #[arg(long)]
    pub coding_gain: bool,
    /// Largest number of difference vectors enumerated per group
    #[arg(long, default_value_t = uwstbc::codecheck::DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub workers: Workers,
}

#[derive(Args, Debug)]
pub struct ComplexityArgs {
    #[arg(long, value_name = "N1,N2,...")]
    pub sizes: String,
    /// Constellation size
    #[arg(long = "M", value_name = "M")]
    pub m: u64,
    /// square or nonrect
    #[arg(long, default_value = "square")]
    pub kind: String,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReproArgs {
    /// Regenerate the basis table, check the bundled codes and rerun both maximum-rate searches
    #[arg(long)]
    pub paper_tables: bool,
    /// Where to write the individual artifacts
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    /// Expected digests to compare against (default: the recorded set)
    #[arg(long, value_name = "PATH")]
    pub expected: Option<PathBuf>,
    /// Write the digests of this run as a new expectation file
    #[arg(long, value_name = "PATH")]
    pub record_digests: Option<PathBuf>,
    /// Reproduction report
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub workers: Workers,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Workers {
    /// Worker threads for search and enumeration (default: all cores)
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: Option<u64>,
}

impl Workers {
    pub fn count(self) -> usize {
        match self.workers {
            Some(w) => w as usize,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}
