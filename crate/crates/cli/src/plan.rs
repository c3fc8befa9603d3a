//! Command-line surface. A parsed [`RunPlan`] serializes to JSON and can be
//! replayed with `--plan`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use arbor_core::forest::{CutStrategy, SplitMode};
use arbor_core::graph::{Family, GeneratorSpec};
use arbor_core::star::StarMode;

fn parse_eps(s: &str) -> Result<f64, String> {
    let value: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if value.is_finite() && value > 0.0 && value <= 1.0 {
        Ok(value)
    } else {
        Err(format!("epsilon must lie in (0, 1], got {value}"))
    }
}

#[derive(Parser, Debug, Clone, Serialize, Deserialize)]
#[command(name = "arbor", version, about = "Forest, star-forest and orientation decompositions of multigraphs")]
pub struct RunPlan {
    /// Root seed for every random choice.
    #[arg(long, global = true, env = "ARBOR_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Worker threads (0 picks the number of cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,

    /// Write this plan as JSON before running it.
    #[arg(long, global = true, value_name = "PATH")]
    #[serde(skip)]
    pub save_plan: Option<PathBuf>,

    /// Run a plan saved with --save-plan instead of a subcommand.
    #[arg(long, value_name = "PATH", conflicts_with = "save_plan")]
    #[serde(skip)]
    pub plan: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Generate a graph as an edge list.
    Gen(GenArgs),
    /// Low-outdegree orientation.
    Orient(OrientArgs),
    /// Forest decomposition.
    Decompose(DecomposeArgs),
    /// Star-forest decomposition of a simple graph.
    Star(StarArgs),
    /// List-forest decomposition.
    Lfd(LfdArgs),
    /// Check a stored result against a graph.
    Verify(VerifyArgs),
    /// Sweep sizes and slacks and write a CSV of costs.
    Bench(BenchArgs),
    /// Exact density parameters of a graph.
    Oracle(OracleArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[value(rename_all = "snake_case")]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    PathMultigraph,
    #[value(name = "lower_bound_G")]
    #[serde(rename = "lower_bound_G")]
    LowerBoundG,
    #[value(name = "lower_bound_G_prime")]
    #[serde(rename = "lower_bound_G_prime")]
    LowerBoundGPrime,
    K4Expanded,
    RandomForestUnion,
    Gnp,
    Star,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct FamilyArgs {
    #[arg(long)]
    pub family: FamilyName,
    /// Path length.
    #[arg(long)]
    pub l: Option<usize>,
    /// Parallel edges per pair, or number of spanning trees.
    #[arg(long)]
    pub k: Option<usize>,
    /// Multiplicity of the gadget paths.
    #[arg(long)]
    pub a: Option<usize>,
    /// Inner vertices per gadget path.
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge probability.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub leaves: Option<usize>,
}

impl FamilyArgs {
    pub fn spec(&self, seed: u64) -> Result<GeneratorSpec, String> {
        fn need<T: Copy>(value: Option<T>, flag: &str) -> Result<T, String> {
            value.ok_or_else(|| format!("--{flag} is required for this family"))
        }
        let family = match self.family {
            FamilyName::PathMultigraph => Family::PathMultigraph { l: need(self.l, "l")?, k: need(self.k, "k")? },
            FamilyName::LowerBoundG => Family::LowerBoundG { a: need(self.a, "a")?, t: need(self.t, "t")? },
            FamilyName::LowerBoundGPrime => Family::LowerBoundGPrime { a: need(self.a, "a")?, t: need(self.t, "t")? },
            FamilyName::K4Expanded => Family::K4Expanded { t: need(self.t, "t")? },
            FamilyName::RandomForestUnion => Family::RandomForestUnion { n: need(self.n, "n")?, k: need(self.k, "k")? },
            FamilyName::Gnp => Family::Gnp { n: need(self.n, "n")?, p: need(self.p, "p")? },
            FamilyName::Star => Family::Star { leaves: need(self.leaves, "leaves")? },
        };
        Ok(GeneratorSpec::new(family, seed))
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct GenArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Output edge list (stdout if omitted).
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

/// Where the input graph comes from: an edge-list file or an inline
/// generator spec such as `{"family":"gnp","n":50,"p":0.1,"seed":3}`.
#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[group(required = true, multiple = false)]
pub struct GraphSource {
    #[arg(long = "in", value_name = "PATH")]
    pub input: Option<PathBuf>,
    #[arg(long = "gen", value_name = "JSON")]
    pub generator: Option<String>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct Outputs {
    /// Result JSON (stdout if omitted).
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    /// Verification report JSON.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Round ledger JSON.
    #[arg(long)]
    pub ledger: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct OrientArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[arg(long, value_parser = parse_eps)]
    pub eps: f64,
    /// Pseudo-arboricity bound (computed exactly if omitted).
    #[arg(long)]
    pub a_star: Option<usize>,
    #[command(flatten)]
    pub outputs: Outputs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Main run plus recolored leftover.
    CombineFd,
    /// H-partition followed by greedy coloring along the orientation.
    GreedyLfd,
    /// `combine-fd`, then diameter reduction of every class.
    Diameter,
    /// Exhaustive minimum-diameter search with exactly `--colors` colors.
    Exhaustive,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyArg {
    Diameter,
    RandomDepth,
    RandomOutEdge,
    NoOp,
}

impl From<StrategyArg> for CutStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Diameter => CutStrategy::Diameter,
            StrategyArg::RandomDepth => CutStrategy::RandomDepth,
            StrategyArg::RandomOutEdge => CutStrategy::RandomOutEdge,
            StrategyArg::NoOp => CutStrategy::NoOp,
        }
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[arg(long, value_parser = parse_eps)]
    pub eps: f64,
    #[arg(long, value_enum, default_value_t = Algorithm::CombineFd)]
    pub algo: Algorithm,
    /// Cut strategy for the main run (chosen from the parameters if omitted).
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyArg>,
    /// Arboricity bound to plan with (exact or best available if omitted).
    #[arg(long)]
    pub a_bound: Option<usize>,
    /// Number of colors for the exhaustive search.
    #[arg(long)]
    pub colors: Option<usize>,
    /// Fail unless every color class has tree diameter at most this.
    #[arg(long)]
    pub max_diameter: Option<usize>,
    #[command(flatten)]
    pub outputs: Outputs,
}

/// Palettes from a JSON file of per-edge color lists, or drawn at random.
#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct PaletteArgs {
    #[arg(long, value_name = "PATH", conflicts_with_all = ["list_size", "universe"])]
    pub palettes: Option<PathBuf>,
    /// Size of each random palette.
    #[arg(long, requires = "universe")]
    pub list_size: Option<usize>,
    /// Random palettes draw from colors `0..universe`.
    #[arg(long, requires = "list_size")]
    pub universe: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StarModeArg {
    Sfd,
    Lsfd,
}

impl From<StarModeArg> for StarMode {
    fn from(m: StarModeArg) -> Self {
        match m {
            StarModeArg::Sfd => StarMode::Sfd,
            StarModeArg::Lsfd => StarMode::Lsfd,
        }
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct StarArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[arg(long, value_parser = parse_eps)]
    pub eps: f64,
    #[arg(long, value_enum, default_value_t = StarModeArg::Sfd)]
    pub mode: StarModeArg,
    /// Skip the density conditions and rely on resampling and verification.
    #[arg(long)]
    pub relaxed: bool,
    #[command(flatten)]
    pub palettes: PaletteArgs,
    #[command(flatten)]
    pub outputs: Outputs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitArg {
    Stochastic,
    Independent,
}

impl From<SplitArg> for SplitMode {
    fn from(s: SplitArg) -> Self {
        match s {
            SplitArg::Stochastic => SplitMode::Stochastic,
            SplitArg::Independent => SplitMode::Independent,
        }
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct LfdArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[arg(long, value_parser = parse_eps)]
    pub eps: f64,
    /// Arboricity bound the palettes are sized for.
    #[arg(long)]
    pub a: Option<usize>,
    #[arg(long, value_enum, default_value_t = SplitArg::Stochastic)]
    pub split: SplitArg,
    #[command(flatten)]
    pub palettes: PaletteArgs,
    #[command(flatten)]
    pub outputs: Outputs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Forest,
    Star,
    Orientation,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: GraphSource,
    /// Result JSON written by another subcommand, or a bare coloring.
    #[arg(long)]
    pub result: PathBuf,
    #[arg(long, value_enum, default_value_t = CheckKind::Forest)]
    pub kind: CheckKind,
    /// Largest allowed color count, or outdegree for orientations.
    #[arg(long)]
    pub k: Option<usize>,
    /// Palettes every color must come from.
    #[arg(long, value_name = "PATH")]
    pub palettes: Option<PathBuf>,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchAlgorithm {
    CombineFd,
    Orient,
    GreedyLfd,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct BenchArgs {
    /// Vertex counts of the random forest unions.
    #[arg(long, value_delimiter = ',', default_value = "256,512,1024,2048,4096,8192,16384")]
    pub sizes: Vec<usize>,
    #[arg(long, value_parser = parse_eps, value_delimiter = ',', default_value = "1,0.5,0.25")]
    pub eps: Vec<f64>,
    /// Spanning trees per graph.
    #[arg(long, default_value_t = 12)]
    pub k: usize,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "combine-fd,orient")]
    pub algos: Vec<BenchAlgorithm>,
    /// Write 0 for wall time so the CSV is reproducible.
    #[arg(long)]
    pub no_timing: bool,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct OracleArgs {
    #[command(flatten)]
    pub source: GraphSource,
    /// Also find the least tree diameter over all forest decompositions
    /// with this many colors.
    #[arg(long)]
    pub min_diameter_colors: Option<usize>,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}
