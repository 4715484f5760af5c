use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "pseudocone", version, about = "Fundamental-cone generators, LP union bounds and LP decoding simulation")]
pub struct Cli {
    /// Worker threads; outputs do not depend on this.
    #[arg(long, global = true, env = "PSEUDOCONE_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate or sample generators of the fundamental cone.
    Rays(RaysArgs),
    /// List codewords of a given Hamming weight.
    Codewords(CodewordsArgs),
    /// LP and improved LP union bounds over an SNR grid.
    Bounds(BoundsArgs),
    /// Monte-Carlo frame-error simulation.
    Sim(SimArgs),
    /// Minimum-spanning-tree angle distribution of a vector set.
    Angles(AnglesArgs),
    /// Re-run a command from its manifest and compare outputs.
    Replay(ReplayArgs),
}

#[derive(Args, Debug, Clone)]
#[group(id = "matrix_source", multiple = false)]
pub struct MatrixSource {
    /// Parity-check matrix file (dense 0/1 rows or alist).
    #[arg(long, group = "matrix_source")]
    pub matrix: Option<PathBuf>,
    /// Built-in matrix: golay24_HGpp, bch31_21, bch31_26, hamming74.
    #[arg(long, group = "matrix_source")]
    pub builtin: Option<String>,
    /// Generator polynomial of a cyclic code, e.g. "x^6+x+1" or "6,1,0".
    #[arg(long, group = "matrix_source", requires = "length")]
    pub poly: Option<String>,
    /// Code length for --poly.
    #[arg(long)]
    pub length: Option<usize>,
}

#[derive(Args, Debug)]
pub struct RaysArgs {
    #[command(flatten)]
    pub source: MatrixSource,
    /// Exact double-description enumeration (n <= 16).
    #[arg(long, conflicts_with = "sample", required_unless_present = "sample")]
    pub enumerate: bool,
    /// Number of random LP trials.
    #[arg(long)]
    pub sample: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Keep rays with pseudo-weight at most this value.
    #[arg(long, conflicts_with = "k_smallest")]
    pub wp_max: Option<f64>,
    /// Keep the k rays of smallest pseudo-weight.
    #[arg(long)]
    pub k_smallest: Option<usize>,
    /// Abort enumeration beyond this many intermediate rays.
    #[arg(long, default_value_t = 1_000_000)]
    pub max_rays: usize,
    #[arg(long, default_value = "generators.csv")]
    pub out: PathBuf,
    /// Also write a pseudo-weight histogram.
    #[arg(long)]
    pub histogram: Option<PathBuf>,
    #[arg(long, default_value_t = 0.25)]
    pub bin_width: f64,
}

#[derive(Args, Debug)]
pub struct CodewordsArgs {
    #[command(flatten)]
    pub source: MatrixSource,
    /// Hamming weight to keep; defaults to the minimum distance.
    #[arg(long)]
    pub weight: Option<usize>,
    #[arg(long, default_value = "codewords.csv")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// Generator CSV.
    #[arg(long)]
    pub generators: PathBuf,
    /// SNR grid in dB as lo:hi:step.
    #[arg(long)]
    pub snr: String,
    #[arg(long, allow_negative_numbers = true)]
    pub rate: f64,
    #[arg(long, default_value = "bounds.csv")]
    pub out: PathBuf,
    /// Write the optimizing tree at the last SNR point.
    #[arg(long)]
    pub tree_out: Option<PathBuf>,
    /// Record wall-clock seconds per point instead of 0.
    #[arg(long)]
    pub timing: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    MlSub,
    LpdSub,
    LpdFull,
}

#[derive(Args, Debug)]
pub struct SimArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Generator CSV (lpd-sub).
    #[arg(long)]
    pub generators: Option<PathBuf>,
    /// Binary codeword CSV (ml-sub).
    #[arg(long)]
    pub codewords: Option<PathBuf>,
    #[command(flatten)]
    pub source: MatrixSource,
    /// SNR grid in dB as lo:hi:step.
    #[arg(long)]
    pub snr: String,
    /// Code rate; taken from the matrix when one is given.
    #[arg(long, allow_negative_numbers = true)]
    pub rate: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_frames: u64,
    #[arg(long, default_value_t = 100)]
    pub target_errors: u64,
    #[arg(long, default_value = "fer.csv")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct AnglesArgs {
    /// Generator or codeword CSV.
    #[arg(long, alias = "codewords")]
    pub generators: PathBuf,
    #[arg(long, default_value = "mst_edges.csv")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    /// Overwrite the recorded outputs with the regenerated ones.
    #[arg(long)]
    pub write: bool,
}
