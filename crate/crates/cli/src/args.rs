use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "stability-lab", version, about = "Numerical stability criteria on explicitly presented Kähler manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Slopes, destabilizers and the J-equation verdict.
    AnalyzeJ(AnalyzeJ),
    /// Generalized Monge–Ampère test with factor classes.
    AnalyzeGma(AnalyzeGma),
    /// Supercritical dHYM test.
    AnalyzeDhym(AnalyzeDhym),
    /// Factor roots and quotients of the Q_p polynomials.
    Factorize(Factorize),
    /// Cone membership, projection and hypothesis checks.
    Cones(Cones),
    /// Exact walls and chambers along a segment of beta classes.
    Sweep(Sweep),
    /// Brute-force classification on an evenly spaced grid.
    OracleSweep(OracleSweep),
    /// Write the manifold presentation as JSON.
    ExportManifold(ExportManifold),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Wu,
    Blowup,
}

#[derive(Debug, Clone, Args)]
pub struct ManifoldArgs {
    /// Built-in family.
    #[arg(long, value_enum, conflicts_with = "manifold")]
    pub family: Option<Family>,
    /// Degree of the base curve for `wu`.
    #[arg(long, default_value_t = 1)]
    pub d: i64,
    /// Strictly increasing positive weights for `wu`, e.g. `1,3`.
    #[arg(long, value_delimiter = ',')]
    pub weights: Vec<i64>,
    /// Dimension for `blowup`.
    #[arg(long)]
    pub n: Option<usize>,
    /// Manifold presentation JSON file.
    #[arg(long)]
    pub manifold: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Exit with status 3 when a hypothesis check fails.
    #[arg(long, global = true)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct AnalyzeJ {
    #[command(flatten)]
    pub manifold: ManifoldArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    /// Lower bound for the effective test.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
}

#[derive(Debug, Args)]
pub struct AnalyzeGma {
    #[command(flatten)]
    pub manifold: ManifoldArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    /// `c_1, …, c_{n−1}`; `c_n` is solved for.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "inverse_hessian")]
    pub coeffs: Option<String>,
    /// Use the inverse Hessian coefficients `Θ = κθ^k`.
    #[arg(long, conflicts_with = "coeffs")]
    pub inverse_hessian: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AnalyzeDhym {
    #[command(flatten)]
    pub manifold: ManifoldArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    /// Complementary lifted angle in radians; derived from Z when omitted.
    #[arg(long)]
    pub phi_hat: Option<f64>,
    #[arg(long, default_value_t = stability_core::dhym::DEFAULT_EPSILON)]
    pub epsilon: f64,
}

#[derive(Debug, Args)]
pub struct Factorize {
    /// Dimension.
    #[arg(long)]
    pub n: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: String,
}

#[derive(Debug, Args)]
pub struct Cones {
    #[command(flatten)]
    pub manifold: ManifoldArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepVar {
    Beta,
}

#[derive(Debug, Clone, Args)]
pub struct SegmentArgs {
    #[command(flatten)]
    pub manifold: ManifoldArgs,
    /// Class(es) to test; repeat for a set.
    #[arg(long, allow_hyphen_values = true, required = true)]
    pub alpha: Vec<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta0: String,
    #[arg(long, allow_hyphen_values = true)]
    pub beta1: String,
    #[arg(long, value_enum, default_value = "beta")]
    pub var: SweepVar,
    /// Restrict to these candidates, e.g. `S,C`.
    #[arg(long, value_delimiter = ',')]
    pub candidates: Option<Vec<String>>,
    /// gMA coefficients at t = 0; switches to the gMA path.
    #[arg(long, allow_hyphen_values = true, requires = "c1")]
    pub c0: Option<String>,
    /// gMA coefficients at t = 1.
    #[arg(long, allow_hyphen_values = true, requires = "c0")]
    pub c1: Option<String>,
    /// Use `c_1 = 1/μ` along the segment.
    #[arg(long, conflicts_with_all = ["c0", "c1"])]
    pub j_gma: bool,
}

#[derive(Debug, Args)]
pub struct Sweep {
    #[command(flatten)]
    pub segment: SegmentArgs,
}

#[derive(Debug, Args)]
pub struct OracleSweep {
    #[command(flatten)]
    pub segment: SegmentArgs,
    #[arg(long, default_value_t = 1000)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct ExportManifold {
    #[command(flatten)]
    pub manifold: ManifoldArgs,
}
