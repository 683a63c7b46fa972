use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "fracstable", version, about = "Fractional operators, stable laws and their numerical certificates")]
pub struct Cli {
    /// Random seed; falls back to FRACSTABLE_SEED, then 0xC0FFEE.
    #[arg(long, global = true, value_parser = parse_seed)]
    pub seed: Option<u64>,
    /// Output format (default: csv for tables, json for reports).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<std::path::PathBuf>,
    /// Report runtime_ms as 0 so repeated runs are byte-identical.
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mittag-Leffler function E_α and its first two derivatives.
    Ml(MlArgs),
    /// Fractional derivatives of a built-in test function.
    Fracop(FracopArgs),
    /// Densities of V_α, Y_α, Z_β and I_-.
    Density(DensityArgs),
    /// Closed-form moments.
    Moments(MomentsArgs),
    /// Exact samplers.
    Sample(SampleArgs),
    /// Path-discretized reflected stable process at the horizon.
    Simulate(SimulateArgs),
    /// Run one verification and print its report.
    Verify(VerifyArgs),
    /// Discretization bias of the reflected path against the exact law.
    CalibrateBias(CalibrateArgs),
}

#[derive(Debug, Args)]
pub struct MlArgs {
    #[arg(long)]
    pub alpha: f64,
    /// Points as a list `a,b,c` or a grid `start:end:count`.
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, default_value_t = 0)]
    pub deriv: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FracOp {
    Caputo,
    DeltaPlus,
    RlLeft,
    RlLeftAm1,
    RlRight,
    Generator,
}

#[derive(Debug, Args)]
pub struct FracopArgs {
    #[arg(long, value_enum)]
    pub op: FracOp,
    #[arg(long)]
    pub alpha: f64,
    /// gauss, cauchy2 or x2exp.
    #[arg(long = "fn", default_value = "gauss")]
    pub func: String,
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    /// Positive jump weight for `--op generator` (default: spectrally negative).
    #[arg(long)]
    pub c_plus: Option<f64>,
    /// Negative jump weight for `--op generator`.
    #[arg(long)]
    pub c_minus: Option<f64>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DensityLaw {
    Valpha,
    Yalpha,
    Zbeta,
    Iminus,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long, value_enum)]
    pub law: DensityLaw,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub t: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MomentLaw {
    V,
    Y,
    X,
    Xhat,
    Iminus,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    #[arg(long, value_enum)]
    pub law: MomentLaw,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SampleLaw {
    Valpha,
    PosStable,
    StableIncrement,
    Xhat,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub law: SampleLaw,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReflectArg {
    Sup,
    Inf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value = "sup")]
    pub reflect: ReflectArg,
    #[arg(long, default_value_t = 1024)]
    pub steps: u32,
    #[arg(long, default_value_t = 1000)]
    pub paths: usize,
    #[arg(long, default_value_t = 1.0)]
    pub horizon: f64,
    /// Dyadic halvings of the last step.
    #[arg(long, default_value_t = 0)]
    pub refine: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Intertwining,
    IdentityLaw,
    Factorization,
    Cm,
    Resolvent,
    Lamperti,
    Rep,
    Laplace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CmTargetArg {
    RecipMl,
    FMinusFprime,
    ExpRatio,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PartArg {
    Mass,
    Generator,
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LaplaceLawArg {
    StableIncrement,
    PosStable,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub check: Check,
    #[arg(long)]
    pub alpha: f64,
    /// Test function for intertwining and resolvent.
    #[arg(long = "fn", default_value = "gauss")]
    pub func: String,
    /// Evaluation points: x for intertwining, cm and resolvent, y for rep.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Moment orders for factorization.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    /// Laplace variables for lamperti and laplace.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Tolerance for intertwining.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long, value_enum)]
    pub target: Option<CmTargetArg>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long, value_enum)]
    pub part: Option<PartArg>,
    #[arg(long, value_enum)]
    pub law: Option<LaplaceLawArg>,
    /// Monte Carlo size for laplace.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub n_exact: Option<usize>,
    #[arg(long)]
    pub paths: Option<usize>,
    #[arg(long)]
    pub steps: Option<u32>,
    #[arg(long)]
    pub calibration_paths: Option<usize>,
    #[arg(long)]
    pub refine: Option<u32>,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    #[arg(long)]
    pub alpha: f64,
    /// Step counts, powers of two.
    #[arg(long, default_value = "256,1024,4096")]
    pub ladder: String,
    #[arg(long, default_value_t = 10_000)]
    pub paths: usize,
    #[arg(long, default_value_t = 0)]
    pub refine: u32,
}

/// Decimal or `0x` hexadecimal.
pub fn parse_seed(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16),
        None => s.parse(),
    };
    r.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

/// `a,b,c` or `start:end:count` (endpoints included).
pub fn parse_points(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("invalid number {t:?}: {e}"));
    match parts.len() {
        1 => s.split(',').map(num).collect(),
        3 => {
            let (a, b) = (num(parts[0])?, num(parts[1])?);
            let n: usize = parts[2].trim().parse().map_err(|e| format!("invalid count {:?}: {e}", parts[2]))?;
            match n {
                0 => Err("grid count must be positive".into()),
                1 => Ok(vec![a]),
                _ => Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()),
            }
        }
        _ => Err(format!("expected a list a,b,c or a grid start:end:count, got {s:?}")),
    }
}
