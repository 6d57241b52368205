use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mpls::instance::Family;
use mpls::scalar::parse_ratio;
use mpls::solver::{SlidingConfig, SwapRule};
use mpls::Rational;
use serde::Serialize;

fn ratio(text: &str) -> Result<Rational, String> {
    parse_ratio(text).map_err(|e| e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "mpls", version, about = "Sliding local search for weighted matroid k-parity")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run algorithms on one instance and emit JSON-lines results.
    Solve(SolveArgs),
    /// Sample many seeds per instance and print a ratio summary table.
    Bench(BenchArgs),
    /// Write a generated instance file.
    Gen(GenArgs),
    /// Exact optimum of one instance.
    Exact(ExactArgs),
    /// Exchange, trace and marker verifiers with JSON reports.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    Sliding,
    Greedy,
    Exact,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Sliding => "sliding",
            Algo::Greedy => "greedy",
            Algo::Exact => "exact",
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FamilyName {
    RandomKSetPacking,
    RandomKMiPartition,
    GraphicParity,
    GreedyTrap,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RuleName {
    FirstLex,
    BestGain,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MethodName {
    BranchAndBound,
    SubsetEnum,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    /// Generator family.
    #[arg(long = "gen", value_enum)]
    pub family: Option<FamilyName>,
    /// Edge size bound (number of matroids for k-mi-partition).
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    /// Greedy-trap light-edge deficit: light edges weigh 1 - rho.
    #[arg(long, default_value = "0.1", value_parser = ratio)]
    pub rho: Rational,
    #[arg(long, default_value_t = 8)]
    pub edges: usize,
    #[arg(long, default_value_t = 9)]
    pub vertices: usize,
    #[arg(long, default_value_t = 8)]
    pub elements: usize,
    #[arg(long, default_value_t = 3)]
    pub blocks: usize,
    #[arg(long, default_value_t = 5)]
    pub graph_vertices: usize,
    #[arg(long, default_value_t = 8)]
    pub graph_edges: usize,
}

impl FamilyArgs {
    pub fn family(&self) -> Option<Family> {
        let k = self.k;
        Some(match self.family? {
            FamilyName::RandomKSetPacking => Family::RandomKSetPacking {
                edges: self.edges,
                k,
                vertices: self.vertices,
            },
            FamilyName::RandomKMiPartition => Family::RandomKMiPartition {
                elements: self.elements,
                k,
                blocks: self.blocks,
            },
            FamilyName::GraphicParity => Family::GraphicParity {
                graph_vertices: self.graph_vertices,
                graph_edges: self.graph_edges,
                k,
            },
            FamilyName::GreedyTrap => Family::GreedyTrap {
                k,
                rho: self.rho.clone(),
            },
        })
    }
}

/// Where instances come from: files, or a generator family.
#[derive(Args, Debug, Clone)]
pub struct InstanceArgs {
    /// Instance file in the JSON schema; repeatable for bench.
    #[arg(long, conflicts_with = "family")]
    pub instance: Vec<PathBuf>,
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Seed of the first generated instance.
    #[arg(long, default_value_t = 0)]
    pub gen_seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    #[arg(long, default_value = "0.3873", value_parser = ratio)]
    pub epsilon: Rational,
    #[arg(long, default_value = "0.0001", value_parser = ratio)]
    pub delta: Rational,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "first-lex")]
    pub swap_rule: RuleName,
}

impl SearchArgs {
    pub fn config(&self) -> SlidingConfig {
        SlidingConfig {
            rule: match self.swap_rule {
                RuleName::FirstLex => SwapRule::FirstLex,
                RuleName::BestGain => SwapRule::BestGain,
            },
            ..SlidingConfig::new(self.epsilon.clone(), self.delta.clone())
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct SolverArgs {
    #[command(flatten)]
    pub search: SearchArgs,
    /// Independent runs per seed; the best one is reported.
    #[arg(long, default_value_t = 1)]
    pub runs: usize,
    /// Round weights to integers before searching (default).
    #[arg(long, overrides_with = "no_scale")]
    pub scale: bool,
    #[arg(long)]
    pub no_scale: bool,
    /// Precision of weight rounding.
    #[arg(long, default_value = "0.1", value_parser = ratio)]
    pub scale_epsilon: Rational,
    /// Exhaustive-search size cap; MPLS_EXACT_LIMIT when unset.
    #[arg(long)]
    pub exact_limit: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// JSON-lines result file; standard output when unset.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV summary file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Record wall time; off by default so output is reproducible.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "sliding")]
    pub algo: Vec<Algo>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Generated instances, with seeds counting up from --gen-seed.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Sliding seeds per instance.
    #[arg(long, default_value_t = 100)]
    pub tau_samples: usize,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "sliding,greedy,exact")]
    pub algo: Vec<Algo>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExactArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, value_enum, default_value = "branch-and-bound")]
    pub method: MethodName,
    #[arg(long)]
    pub exact_limit: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub timing: bool,
}

#[derive(Subcommand, Debug)]
pub enum VerifyCommand {
    /// Random exchange cases against the multi-part exchange search.
    Rota(ExchangeArgs),
    /// Random exchange cases against the laminar refinement.
    Laminar(ExchangeArgs),
    /// Conflict-trace invariants for one sliding run.
    Trace(TraceArgs),
    /// Bad-marker frequencies over sampled shifts.
    Badprob(BadprobArgs),
    /// Non-composable swaps on K4.
    K4(ReportArgs),
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// JSON report file; standard output when unset.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExchangeArgs {
    #[arg(long, default_value_t = 1000)]
    pub cases: usize,
    #[arg(long, default_value_t = 7)]
    pub max_ground: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub report: ReportArgs,
}

#[derive(Args, Debug)]
pub struct TraceArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long, default_value = "0.2253", value_parser = ratio)]
    pub gamma: Rational,
    #[command(flatten)]
    pub report: ReportArgs,
}

#[derive(Args, Debug)]
pub struct BadprobArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long, default_value = "0.2253", value_parser = ratio)]
    pub gamma: Rational,
    #[arg(long, default_value_t = 10_000)]
    pub tau_samples: u64,
    #[command(flatten)]
    pub report: ReportArgs,
}
