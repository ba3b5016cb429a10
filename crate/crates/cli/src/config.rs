use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Bumped whenever an output format changes, so old hashes stop matching.
const FORMAT_VERSION: &str = "qcflc-1";

#[derive(Debug, Parser)]
#[command(name = "qcflc", version, about = "Quasicrystal potentials: generation, FLC analysis and spectral scans")]
pub struct Cli {
    /// Run the configuration stored in this JSON file instead of a subcommand.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (default: $QFLC_OUT_DIR, else the current directory).
    #[arg(long, global = true, env = "QFLC_OUT_DIR")]
    pub out_dir: Option<PathBuf>,
    /// File stem for the outputs (default depends on the command).
    #[arg(long, global = true)]
    pub output: Option<String>,
    /// Worker threads for energy scans (0: one per core). Never affects output.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Keep existing outputs whose embedded config hash matches; a mismatch
    /// is an error.
    #[arg(long, global = true)]
    pub resume: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

/// Everything needed to reproduce a run. Written next to every output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub output: Option<String>,
    #[serde(default)]
    pub threads: usize,
}

impl RunConfig {
    /// SHA-256 over the command alone: output location and thread count do
    /// not change results.
    pub fn hash(&self) -> String {
        let body = serde_json::to_string(&self.command).expect("commands always serialize");
        let mut h = Sha256::new();
        h.update(FORMAT_VERSION.as_bytes());
        h.update(body.as_bytes());
        format!("{:x}", h.finalize())
    }
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
pub enum Command {
    /// Symbolic words and windows.
    #[command(subcommand)]
    Generate(Generate),
    /// Finite-local-complexity checkers and symbolic diagnostics.
    #[command(subcommand)]
    Analyze(Analyze),
    /// Transfer-matrix scans over energy.
    #[command(subcommand)]
    Scan(Scan),
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Generate {
    /// Order-N Fibonacci word (S_0 = b, S_1 = a, S_{k+1} = S_k S_{k-1}).
    Fibonacci {
        #[arg(long)]
        iterations: usize,
    },
    /// sigma^N(seed) for a substitution like "a->ab,b->a".
    Substitution {
        #[arg(long)]
        rules: String,
        #[arg(long)]
        seed: String,
        #[arg(long)]
        iterations: usize,
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Circle-map word: 1 where n*alpha mod 1 lies in (1 - beta, 1].
    Circle {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        /// First index.
        #[arg(short, long, default_value_t = 0)]
        m: i64,
        /// Last index.
        #[arg(short, long)]
        n: i64,
    },
    /// i.i.d. word with P(0) = p.
    Bernoulli {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        n: usize,
    },
    /// Suspension of a word file: per-letter profiles (JSON array of pieces),
    /// or point masses of the letter values with per-letter lengths.
    Suspend {
        #[arg(long)]
        word: PathBuf,
        #[arg(long, conflicts_with = "lengths")]
        profiles: Option<PathBuf>,
        /// Comma-separated block lengths, one per letter, e.g. "1,phi".
        #[arg(long)]
        lengths: Option<String>,
        /// Builtin basis for --lengths: integer, golden or pi.
        #[arg(long, default_value = "golden")]
        basis: String,
    },
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct Decomp {
    #[arg(long)]
    pub window: PathBuf,
    /// Piece set (JSON array of pieces); default cuts the window at its atoms.
    #[arg(long)]
    pub pieces: Option<PathBuf>,
    /// Decomposition start (default: window origin).
    #[arg(long)]
    pub x0: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Analyze {
    /// Strong finite decomposition property at radius ell.
    Sfdp {
        #[command(flatten)]
        #[serde(flatten)]
        dec: Decomp,
        #[arg(long)]
        ell: String,
    },
    /// Unique decomposition property at radius R.
    Udp {
        #[command(flatten)]
        #[serde(flatten)]
        dec: Decomp,
        #[arg(long)]
        radius: String,
    },
    /// Local patch census at sampling step rho for each radius.
    Flp {
        #[arg(long)]
        window: PathBuf,
        #[arg(long)]
        rho: String,
        #[arg(long, value_delimiter = ',', required = true)]
        radii: Vec<String>,
    },
    /// Extension census: prefixes of length r, extensions of length l.
    Fep {
        #[arg(long)]
        window: PathBuf,
        #[arg(short)]
        r: String,
        #[arg(short)]
        l: String,
    },
    /// Eventual period (x0, p).
    Period {
        #[arg(long)]
        window: PathBuf,
    },
    /// Triple-block census for the given block lengths.
    Gordon {
        #[arg(long)]
        word: PathBuf,
        #[arg(long, value_delimiter = ',')]
        p: Vec<usize>,
        /// Use the continued-fraction denominators of --alpha as block lengths.
        #[arg(long, requires = "alpha")]
        p_from_cf: bool,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value_t = 20)]
        cf_terms: usize,
    },
    /// Continued fraction, convergents and the Kaminaga count.
    Cf {
        #[arg(long)]
        alpha: String,
        #[arg(short, long, default_value_t = 20)]
        n: usize,
    },
    /// Delone and patch-count report for a colored point set.
    Points {
        #[arg(long)]
        points: PathBuf,
        #[arg(short)]
        r: String,
        #[arg(long)]
        big_r: String,
        #[arg(short)]
        l: String,
    },
    /// Whether a window is a Delone measure of finite local complexity for
    /// the given profiles.
    DeloneMeasure {
        #[arg(long)]
        window: PathBuf,
        #[arg(long)]
        profiles: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Scan {
    /// Floquet bands of a period piece; CSV of the discriminant on a grid
    /// plus a JSON band list.
    Bands {
        #[arg(long)]
        period: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        emin: f64,
        #[arg(long)]
        emax: f64,
        /// Bisection grid step.
        #[arg(long, default_value_t = 1e-3)]
        resolution: f64,
        /// Points in the CSV grid.
        #[arg(long, default_value_t = 1001)]
        points: usize,
    },
    /// Lyapunov exponents at seeded uniform random energies.
    Lyapunov {
        /// Finite window, propagated once.
        #[arg(long, group = "source")]
        window: Option<PathBuf>,
        /// Period piece, repeated `cells` times.
        #[arg(long, group = "source")]
        period: Option<PathBuf>,
        /// Fibonacci Kronig-Penney coupling.
        #[arg(long, group = "source")]
        fibonacci: Option<f64>,
        #[arg(long, default_value_t = 100)]
        energies: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        emin: f64,
        #[arg(long, default_value_t = 20.0)]
        emax: f64,
        #[arg(long, default_value_t = 10_000)]
        cells: usize,
        #[arg(long, default_value_t = 1)]
        samples: usize,
    },
    /// Dirichlet eigenvalue counts below each energy.
    Eigencount {
        #[arg(long)]
        window: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        energies: Vec<f64>,
    },
    /// Fibonacci trace-map half-traces and residuals.
    TraceMap {
        #[arg(long)]
        energy: f64,
        #[arg(long)]
        coupling: f64,
        #[arg(long, default_value_t = 12)]
        order: usize,
    },
}
