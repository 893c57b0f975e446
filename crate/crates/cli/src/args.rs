use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "logcap", version, about = "Capacities, mixed derivatives and Van der Waerden type bounds")]
pub struct Cli {
    /// Base seed for every sampled check.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Relative gradient tolerance of the capacity solver.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Write the report here instead of standard output.
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
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Capacity Cap(f), or C_f(R) with --target.
    Cap(CapArgs),
    /// Der_f(R) against C_f(R): the two-sided monomial bounds.
    Cfr(TargetArgs),
    /// Exact mixed derivative Der_f(R) at the origin.
    Der(TargetArgs),
    /// Strong log-concavity: exact where possible, sampled otherwise.
    Slc(SlcArgs),
    /// Whether the support equals the lattice points of its convex hull.
    Dconvex(SourceArgs),
    /// Support against the subset-degree (Rado) description; submodularity.
    Rado(SourceArgs),
    /// Log-concavity of the moment vector along the weighted shift flow.
    Propagate(PropagateArgs),
    /// Bound verifiers on one input or a named suite.
    Verify(VerifyArgs),
    /// Permanent checks on a nonnegative matrix.
    Perm(PermArgs),
    /// Inner-product lower bounds for two homogeneous polynomials.
    Inner(InnerArgs),
    /// Execute a JSON manifest of commands into one report.
    Run(RunArgs),
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Polynomial JSON file.
    #[arg(long)]
    pub poly: Option<PathBuf>,
    /// Catalog fixture by name.
    #[arg(long)]
    pub fixture: Option<String>,
    /// exp(<a, x>) with the given positive coefficients, e.g. 1,2,1/2.
    #[arg(long = "exp")]
    pub exp_linear: Option<String>,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    #[command(flatten)]
    pub source: Source,
}

#[derive(Debug, Args)]
pub struct CapArgs {
    #[command(flatten)]
    pub source: Source,
    /// Target R, comma separated; rationals allowed.
    #[arg(long)]
    pub target: Option<String>,
    /// Divide by prod x_i^{r_i} instead of prod (x_i/r_i)^{r_i}.
    #[arg(long)]
    pub unscaled: bool,
}

#[derive(Debug, Args)]
pub struct TargetArgs {
    #[command(flatten)]
    pub source: Source,
    /// Exponent vector R, comma separated.
    #[arg(long)]
    pub target: String,
    #[arg(long, value_enum)]
    pub provenance: Option<ProvenanceArg>,
}

#[derive(Debug, Args)]
pub struct SlcArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct PropagateArgs {
    /// Weight sequence b as a JSON array, or {"b": [...]}.
    #[arg(long)]
    pub weights: PathBuf,
    /// Univariate polynomial JSON file.
    #[arg(long)]
    pub poly: PathBuf,
    /// Nonnegative times, comma separated.
    #[arg(long, default_value = "0,1/2,1,2")]
    pub grid: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProvenanceArg {
    /// Input constructed as strongly log-concave; lower bounds are guaranteed.
    Constructive,
    /// No certificate; lower bounds are evaluated but not guaranteed.
    User,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Bound {
    Main,
    Monomial,
    Schrijver,
    Exchange,
    CfLogconcavity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Entire,
    Homogeneous,
    Polynomial,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Named suite over the built-in catalog.
    #[arg(long, conflicts_with_all = ["poly", "fixture", "exp_linear"])]
    pub suite: Option<String>,
    #[arg(long)]
    pub poly: Option<PathBuf>,
    #[arg(long)]
    pub fixture: Option<String>,
    #[arg(long = "exp")]
    pub exp_linear: Option<String>,
    #[arg(long, value_enum, default_value_t = Bound::Main)]
    pub bound: Bound,
    /// Constant family for --bound main.
    #[arg(long, value_enum, default_value_t = Kind::Homogeneous)]
    pub kind: Kind,
    /// Target for --bound monomial and --bound exchange.
    #[arg(long)]
    pub target: Option<String>,
    /// Degree bound for --bound schrijver; the largest variable degree by default.
    #[arg(long)]
    pub k: Option<u32>,
    /// Exchanged coordinates for --bound exchange (zero based).
    #[arg(long, default_value = "0,1")]
    pub pair: String,
    #[arg(long, default_value_t = 10)]
    pub triples: usize,
    #[arg(long, value_enum)]
    pub provenance: Option<ProvenanceArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PermCheck {
    /// vdw(n) <= per(A) <= 1 and Cap(Prod_A) = 1.
    Vdw,
    /// Exact permanent.
    Permanent,
    /// Sinkhorn scaling.
    Sinkhorn,
}

#[derive(Debug, Args)]
pub struct PermArgs {
    /// Matrix JSON: {"n": k, "rows": [["p/q", ...], ...]}.
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long, value_enum, default_value_t = PermCheck::Vdw)]
    pub check: PermCheck,
    /// Scale to doubly stochastic before the vdw check.
    #[arg(long)]
    pub scale: bool,
}

#[derive(Debug, Args)]
pub struct InnerArgs {
    #[arg(long)]
    pub p: PathBuf,
    #[arg(long)]
    pub q: PathBuf,
    /// Exponent vector l with sum equal to the degree, e.g. 1,1 or 1/2,1/2,1/2,1/2.
    #[arg(long)]
    pub l: String,
    #[arg(long, value_enum, default_value_t = ProvenanceArg::User)]
    pub provenance: ProvenanceArg,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Manifest JSON: {"seed": 7, "tol": 1e-10, "out": "report.json", "commands": [["verify", "--suite", "all"]]}.
    pub manifest: PathBuf,
}
