use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperalg_core::graph::Semantics;
use hyperalg_core::koenig::GluingVariant;
use hyperalg_core::power::Formulation;
use hyperalg_core::product::Convention;
use hyperalg_core::scalar::DEFAULT_PRIME;

pub fn version() -> String {
    format!(
        "{} (fixtures sha256:{})",
        env!("CARGO_PKG_VERSION"),
        hyperalg_core::fixtures::fixture_set_hash()
    )
}

#[derive(Parser, Debug)]
#[command(name = "hyperalg", version = version(), about = "Exact hypermatrix algebra: BM products, powers, spans and graph invariants")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Arithmetic backend; `auto` follows the input (hypermatrices) or size (graphs).
    #[arg(long, global = true, value_enum, default_value_t = BackendChoice::Auto)]
    pub backend: BackendChoice,
    /// Prime for the mod-p backend.
    #[arg(long, global = true, env = "HYPERALG_PRIME", default_value_t = DEFAULT_PRIME)]
    pub prime: u64,
    /// How a background hypermatrix is indexed by the summation indices.
    #[arg(long, global = true, value_parser = parse_convention, default_value = "literal")]
    pub convention: Convention,
    /// Inflation semantics for graph commands.
    #[arg(long, global = true, value_parser = parse_semantics, default_value = "walks")]
    pub semantics: Semantics,
    /// Shorthand for `--semantics paths`.
    #[arg(long, global = true)]
    pub paths_only: bool,
    /// Power formulation.
    #[arg(long, global = true, value_parser = parse_formulation, default_value = "second")]
    pub formulation: Formulation,
    /// Seed for generated inputs (`gen`, `bench`).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Add wall-clock timings to JSON records (makes output non-deterministic).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendChoice {
    Auto,
    Exact,
    Modp,
}

fn parse_convention(s: &str) -> Result<Convention, String> {
    s.parse()
}

fn parse_semantics(s: &str) -> Result<Semantics, String> {
    s.parse()
}

fn parse_formulation(s: &str) -> Result<Formulation, String> {
    s.parse()
}

fn parse_variant(s: &str) -> Result<GluingVariant, String> {
    s.parse()
}

fn parse_triple(s: &str) -> Result<(usize, usize, usize), String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [r, g, b] = parts[..] else {
        return Err(format!("expected r,g,b, found `{s}`"));
    };
    let p = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad index `{t}`"));
    Ok((p(r)?, p(g)?, p(b)?))
}

pub fn parse_dims(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| format!("bad dimension `{t}`")))
        .collect()
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphFormatArg {
    Edgelist,
    Graph6,
}

#[derive(Args, Debug, Clone)]
pub struct GraphInput {
    /// Input format; by default `.g6`/`.graph6` files are graph6, others edge lists.
    #[arg(long, value_enum)]
    pub format: Option<GraphFormatArg>,
    /// Symmetrize edge lists (graph6 is always undirected).
    #[arg(long)]
    pub undirected: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// BM product of HMX operands, optionally with a background.
    Product {
        /// Background hypermatrix file, or `delta`.
        #[arg(long)]
        background: Option<String>,
        #[arg(required = true, num_args = 2..)]
        operands: Vec<PathBuf>,
    },
    /// A single power of a cubic order-3 hypermatrix.
    Power {
        input: PathBuf,
        /// Second formulation: index k of A^[k].
        #[arg(short = 'k', long, default_value_t = 1)]
        index: usize,
        /// First formulation: odd degree.
        #[arg(long, default_value_t = 1)]
        degree: usize,
        /// First formulation: position of the tree within its degree class.
        #[arg(long, default_value_t = 0)]
        tree: usize,
        /// First formulation: list the degree class instead of computing.
        #[arg(long)]
        list: bool,
    },
    /// Span dimension of a bounded prefix of powers.
    Span {
        input: PathBuf,
        /// Second formulation: number of terms (default n³).
        #[arg(long)]
        terms: Option<usize>,
        /// First formulation: largest degree (default: first degree forcing a dependence).
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Cayley-Hamilton coefficients (order-2 inputs use matrix powers).
    Ch { input: PathBuf },
    /// Tetrahedral counts of a binary cubic hypermatrix.
    Tetra {
        input: PathBuf,
        /// Count two-tetrahedron complexes glued as in this degree-5 product.
        #[arg(long, value_parser = parse_variant, requires = "at")]
        glued: Option<GluingVariant>,
        /// Count k-tetrahedral complexes.
        #[arg(long, requires = "at", conflicts_with = "glued")]
        complex: Option<usize>,
        /// Boundary triangle `r,g,b`.
        #[arg(long, value_parser = parse_triple)]
        at: Option<(usize, usize, usize)>,
    },
    /// Length-two walk (or path) inflation of a graph, as HMX.
    Inflate {
        graph: PathBuf,
        #[command(flatten)]
        input: GraphInput,
    },
    /// Permutation-invariant report for a graph's inflation.
    Invariant {
        graph: PathBuf,
        #[command(flatten)]
        input: GraphInput,
    },
    /// Decide whether the invariant separates two graphs.
    Distinguish {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        input: GraphInput,
    },
    /// Number of ternary parenthesizations with `degree` leaves.
    FussCatalan { degree: usize },
    /// Time production kernels against naive reference paths.
    Bench {
        #[arg(long, value_enum)]
        workload: Workload,
        #[arg(long, default_value_t = 3)]
        size: usize,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        repetitions: u32,
    },
    /// Seeded generators for test inputs.
    #[command(hide = true)]
    Gen {
        #[command(subcommand)]
        what: GenTarget,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Workload {
    Product,
    Span,
}

#[derive(Subcommand, Debug)]
pub enum GenTarget {
    /// Random integer (or 0/1) hypermatrix as HMX.
    Hypermatrix {
        /// Comma-separated dimensions, e.g. `3,3,3`.
        #[arg(long)]
        dims: String,
        #[arg(long, default_value_t = -3, allow_negative_numbers = true)]
        lo: i64,
        #[arg(long, default_value_t = 3, allow_negative_numbers = true)]
        hi: i64,
        /// 0/1 entries with this density instead of integers.
        #[arg(long)]
        binary: Option<f64>,
    },
    /// Random graph as an edge list with an `n` header.
    Graph {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long)]
        directed: bool,
    },
}
