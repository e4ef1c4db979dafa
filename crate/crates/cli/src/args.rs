use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "logq", version, about = "Log-qubit MaxCut solver")]
pub struct Cli {
    /// Worker threads for parallel evaluation (default: all cores).
    #[arg(long, global = true, env = "LOGQ_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimise one instance with the GA or the trust-region solver.
    Solve(SolveArgs),
    /// Run both solvers on a list of instances and tabulate the results.
    Bench(BenchArgs),
    /// Exact MaxCut by enumeration (at most 24 vertices).
    Oracle(OracleArgs),
    /// One-parameter slices of the 4-vertex model landscape.
    Analytic(AnalyticArgs),
    /// Print the padded Laplacian or its Pauli decomposition.
    Dump(DumpArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct GraphSource {
    /// Edge-list file: "n m" header, then one "u v w" line per edge.
    #[arg(long)]
    pub graph: Option<PathBuf>,

    /// Random G(n, p) graph with unit weights.
    #[arg(long, num_args = 3, value_names = ["N", "P", "SEED"])]
    pub gnp: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Ga,
    Grad,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EncodingArg {
    Step,
    Sigmoid,
    Distorted,
}

/// Encoding shape; unset values fall back to the config file, then defaults.
#[derive(Debug, Args, Clone, Default)]
pub struct EncodingOpts {
    #[arg(long, value_enum)]
    pub encoding: Option<EncodingArg>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct GaOpts {
    /// GA population size.
    #[arg(long)]
    pub pop: Option<usize>,
    /// GA generations.
    #[arg(long)]
    pub gens: Option<usize>,
    #[arg(long)]
    pub mutation_rate: Option<f64>,
    #[arg(long)]
    pub crossover_rate: Option<f64>,
    #[arg(long)]
    pub elite: Option<usize>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct GradOpts {
    #[arg(long)]
    pub multistarts: Option<usize>,
    /// Objective-call budget after the multistart samples.
    #[arg(long)]
    pub max_evals: Option<usize>,
    #[arg(long)]
    pub rhobeg: Option<f64>,
    #[arg(long)]
    pub rhoend: Option<f64>,
    #[arg(long)]
    pub post_lambda: Option<f64>,
    /// Coordinates flipped per perturbation restart.
    #[arg(long)]
    pub kick_size: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub source: GraphSource,

    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,

    #[arg(long)]
    pub seed: Option<u64>,

    #[command(flatten)]
    pub encoding: EncodingOpts,
    #[command(flatten)]
    pub ga: GaOpts,
    #[command(flatten)]
    pub grad: GradOpts,

    /// Key-value file (`key = value` per line) supplying defaults for any flag.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Output prefix: writes PREFIX.json and PREFIX.trace.csv.
    #[arg(long, default_value = "logq-solve")]
    pub out: PathBuf,

    /// Print the Pauli decomposition before solving.
    #[arg(long)]
    pub dump_pauli: bool,

    /// Print the padded Laplacian before solving.
    #[arg(long)]
    pub dump_laplacian: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Random instance (repeatable).
    #[arg(long, num_args = 3, value_names = ["N", "P", "SEED"], action = clap::ArgAction::Append)]
    pub gnp: Vec<String>,

    /// Edge-list instance (repeatable).
    #[arg(long, action = clap::ArgAction::Append)]
    pub graph: Vec<PathBuf>,

    /// Solver seed; defaults to each random instance's own seed.
    #[arg(long)]
    pub seed: Option<u64>,

    #[command(flatten)]
    pub ga: GaOpts,
    #[command(flatten)]
    pub grad: GradOpts,

    #[arg(long)]
    pub config: Option<PathBuf>,

    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub source: GraphSource,

    /// Also print the optimal assignment.
    #[arg(long)]
    pub assignment: bool,
}

#[derive(Debug, Args)]
pub struct AnalyticArgs {
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    #[command(flatten)]
    pub encoding: EncodingOpts,
    /// Grid points over [-γπ, (2+γ)π].
    #[arg(long, default_value_t = 2001)]
    pub points: usize,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

macro_rules! display_as_value {
    ($($t:ty),*) => {$(
        impl std::fmt::Display for $t {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                let v = self.to_possible_value().expect("no skipped variants");
                f.write_str(v.get_name())
            }
        }
    )*};
}

display_as_value!(MethodArg, EncodingArg);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DumpWhat {
    Laplacian,
    Pauli,
}

#[derive(Debug, Args)]
pub struct DumpArgs {
    #[arg(value_enum)]
    pub what: DumpWhat,
    #[command(flatten)]
    pub source: GraphSource,
}
