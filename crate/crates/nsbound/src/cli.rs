//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nsbound_core::density::{default_alpha_window, linear_spaced};
use nsbound_core::matrix::DEFAULT_SEARCH_CAP;
use nsbound_core::torus::DEFAULT_BOUNDARY_CONSTANT;
use nsbound_core::{
    alpha_fit, analyze, log_spaced, matrix_density, AlphaLower, AnalyzeOptions, BoundError, BoundReport,
    DensityCurve, DensityError, MatrixError, MinorMode, OrderingMode, PolyMatrix, TorusGrid,
};

use crate::csv_out::write_curve;
use crate::input::{load, InputError};
use crate::report::{alpha_text, analysis_text};

/// Default total sample budget used to pick the per-axis resolution.
pub const AUTO_GRID_BUDGET: u64 = 2_000_000;
/// Largest accepted number of quadrature nodes.
pub const DEFAULT_MAX_POINTS: u64 = 100_000_000;
pub const DEFAULT_LAMBDA_POINTS: usize = 64;
pub const DEFAULT_ALPHA_SLACK: f64 = 0.05;

pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILED: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const ZERO_MATRIX: i32 = 3;
    pub const SEARCH_CAP: i32 = 4;
    pub const COST_GUARD: i32 = 5;
}

#[derive(Parser, Debug)]
#[command(name = "nsbound", version, about = "Spectral density bounds for matrices over Laurent polynomial rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Maximal minor, width tower and explicit density bound.
    Analyze(AnalyzeArgs),
    /// Brute-force spectral density on a torus grid, as CSV.
    Density(DensityArgs),
    /// Density versus bound, plus a power-law fit near zero.
    Verify(VerifyArgs),
    /// Runs the built-in 2x3 example and checks every exact value.
    Example,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderingArg {
    Fixed,
    Exhaustive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MinorArg {
    First,
    Best,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    /// Product midpoint rule, N points per axis.
    Midpoint,
    /// Shifted rank-1 lattice with N^d points.
    Lattice,
}

#[derive(Args, Debug, Clone)]
pub struct AnalysisFlags {
    /// Variable ordering for the width recursion.
    #[arg(long, value_enum, default_value_t = OrderingArg::Fixed)]
    pub ordering: OrderingArg,
    /// Which maximal minor to use.
    #[arg(long, value_enum, default_value_t = MinorArg::First)]
    pub minor: MinorArg,
    /// Largest number of candidate index sets per minor size.
    #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
    pub search_cap: u128,
}

impl AnalysisFlags {
    fn options(&self) -> AnalyzeOptions {
        AnalyzeOptions {
            ordering: match self.ordering {
                OrderingArg::Fixed => OrderingMode::Fixed,
                OrderingArg::Exhaustive => OrderingMode::Exhaustive,
            },
            minor: match self.minor {
                MinorArg::First => MinorMode::First,
                MinorArg::Best => MinorMode::Best,
            },
            search_cap: self.search_cap,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct DensityFlags {
    /// Points per axis [default: floor((2e6)^(1/d))].
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, value_enum, default_value_t = SchemeArg::Midpoint)]
    pub scheme: SchemeArg,
    /// Seed for the lattice shift.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Smallest λ [default: 1e-4·|lead|].
    #[arg(long)]
    pub lambda_min: Option<f64>,
    /// Largest λ [default: |lead|].
    #[arg(long)]
    pub lambda_max: Option<f64>,
    /// Number of λ values.
    #[arg(long, default_value_t = DEFAULT_LAMBDA_POINTS)]
    pub points: usize,
    /// Space λ linearly instead of logarithmically.
    #[arg(long)]
    pub linear: bool,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Constant c in the quadrature tolerance c·d/N.
    #[arg(long, default_value_t = DEFAULT_BOUNDARY_CONSTANT)]
    pub boundary_constant: f64,
    /// Refuse grids with more nodes than this.
    #[arg(long, default_value_t = DEFAULT_MAX_POINTS)]
    pub max_points: u64,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// `.mat` or `.poly` file.
    pub file: PathBuf,
    #[command(flatten)]
    pub analysis: AnalysisFlags,
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    pub file: PathBuf,
    #[command(flatten)]
    pub analysis: AnalysisFlags,
    #[command(flatten)]
    pub density: DensityFlags,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub file: PathBuf,
    #[command(flatten)]
    pub analysis: AnalysisFlags,
    #[command(flatten)]
    pub density: DensityFlags,
    /// Multiplies the bound before comparing; values below 1 force violations.
    #[arg(long, default_value_t = 1.0)]
    pub bound_scale: f64,
    /// Accepted shortfall of the fitted exponent below the lower bound.
    #[arg(long, default_value_t = DEFAULT_ALPHA_SLACK)]
    pub alpha_slack: f64,
    /// Fit window start [default: lowest two decades with 5 points above F(0)].
    #[arg(long, requires = "alpha_max")]
    pub alpha_min: Option<f64>,
    /// Fit window end.
    #[arg(long, requires = "alpha_min")]
    pub alpha_max: Option<f64>,
    /// Also write the CSV here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Bound(#[from] BoundError),
    #[error("{0}")]
    Density(#[from] DensityError),
    #[error("grid has {points} nodes, above the limit of {cap}; lower --grid or raise --max-points")]
    CostGuard { points: u128, cap: u64 },
    #[error("cannot write {}: {source}", path.display())]
    Output { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Usage(_) | CliError::Output { .. } => exit::INPUT,
            CliError::Bound(BoundError::Matrix(MatrixError::ZeroMatrix)) => exit::ZERO_MATRIX,
            CliError::Bound(BoundError::Matrix(MatrixError::SearchCapExceeded { .. }))
            | CliError::Bound(BoundError::ExhaustiveTooLarge { .. }) => exit::SEARCH_CAP,
            CliError::CostGuard { .. } => exit::COST_GUARD,
            _ => exit::FAILED,
        }
    }

    fn render(&self) -> String {
        match self {
            CliError::Input(e) => e.render(),
            e => e.to_string(),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return e.exit_code();
        }
    };
    execute(&cli.command, out, err)
}

pub fn execute(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cmd {
        Command::Analyze(a) => cmd_analyze(a, out),
        Command::Density(a) => cmd_density(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Example => return crate::example::run_example(out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.render());
            e.exit_code()
        }
    }
}

fn analyzed(file: &Path, flags: &AnalysisFlags) -> Result<(PolyMatrix, BoundReport), CliError> {
    let a = load(file)?;
    let report = analyze(&a, &flags.options())?;
    Ok((a, report))
}

pub fn cmd_analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (a, report) = analyzed(&args.file, &args.analysis)?;
    out.write_all(analysis_text(&a, &report).as_bytes()).map_err(stdout_error)?;
    Ok(exit::OK)
}

fn stdout_error(source: std::io::Error) -> CliError {
    CliError::Output { path: "<stdout>".into(), source }
}

/// `⌊budget^{1/d}⌋`, at least 2.
pub fn auto_grid(d: usize) -> usize {
    let mut n = (AUTO_GRID_BUDGET as f64).powf(1.0 / d as f64).floor() as u64;
    while (n + 1).checked_pow(d as u32).is_some_and(|v| v <= AUTO_GRID_BUDGET) {
        n += 1;
    }
    while n > 2 && n.checked_pow(d as u32).is_none_or(|v| v > AUTO_GRID_BUDGET) {
        n -= 1;
    }
    n.max(2) as usize
}

/// Resolved density settings.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub grid: TorusGrid,
    pub per_axis: usize,
    pub lambdas: Vec<f64>,
    pub workers: usize,
    pub boundary_constant: f64,
}

impl RunConfig {
    pub fn resolve(flags: &DensityFlags, dim: usize, lead_abs: f64) -> Result<Self, CliError> {
        let n = flags.grid.unwrap_or_else(|| auto_grid(dim));
        if n < 2 {
            return Err(CliError::Usage("--grid must be at least 2".into()));
        }
        if flags.points < 2 {
            return Err(CliError::Usage("--points must be at least 2".into()));
        }
        if !(flags.boundary_constant >= 0.0 && flags.boundary_constant.is_finite()) {
            return Err(CliError::Usage("--boundary-constant must be a non-negative number".into()));
        }
        let total = (n as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
        if total > flags.max_points as u128 {
            return Err(CliError::CostGuard { points: total, cap: flags.max_points });
        }
        let grid = match flags.scheme {
            SchemeArg::Midpoint => TorusGrid::midpoint(dim, n)?,
            SchemeArg::Lattice => TorusGrid::lattice(dim, total as usize, flags.seed)?,
        };
        let lo = flags.lambda_min.unwrap_or(1e-4 * lead_abs);
        let hi = flags.lambda_max.unwrap_or(lead_abs);
        if !(hi >= lo) || !hi.is_finite() {
            return Err(CliError::Usage(format!("need lambda-min <= lambda-max, got {lo} and {hi}")));
        }
        let lambdas = if flags.linear {
            if lo < 0.0 {
                return Err(CliError::Usage("--lambda-min must be non-negative".into()));
            }
            linear_spaced(lo, hi, flags.points)?
        } else {
            if !(lo > 0.0) {
                return Err(CliError::Usage("--lambda-min must be positive for log spacing".into()));
            }
            log_spaced(lo, hi, flags.points)?
        };
        Ok(Self { grid, per_axis: n, lambdas, workers: flags.workers, boundary_constant: flags.boundary_constant })
    }

    pub fn tolerance(&self) -> f64 {
        self.grid.tolerance(self.boundary_constant)
    }

    /// Evaluates the density curve on a pool with the configured worker count.
    pub fn density(&self, a: &PolyMatrix, k: usize) -> Result<DensityCurve, CliError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
        Ok(pool.install(|| matrix_density(a, k, &self.lambdas, &self.grid))?)
    }
}

fn write_csv_file(path: &Path, curve: &DensityCurve, report: &BoundReport) -> Result<(), CliError> {
    let file = std::fs::File::create(path).map_err(|source| CliError::Output { path: path.into(), source })?;
    write_curve(std::io::BufWriter::new(file), curve, |l| report.bound_at(l))?;
    Ok(())
}

pub fn cmd_density(args: &DensityArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (a, report) = analyzed(&args.file, &args.analysis)?;
    let cfg = RunConfig::resolve(&args.density, a.dim(), report.params.lead_abs)?;
    let curve = cfg.density(&a, report.params.k)?;
    match &args.out {
        Some(path) => write_csv_file(path, &curve, &report)?,
        None => write_curve(out, &curve, |l| report.bound_at(l))?,
    }
    Ok(exit::OK)
}

/// Result of comparing a density curve to its bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    /// `min_λ (s·bound(λ) − (F̂(λ) − F(0)))`.
    pub worst_margin: f64,
    pub worst_lambda: f64,
    pub tolerance: f64,
    pub alpha: AlphaCheck,
}

#[derive(Clone, Debug, PartialEq)]
pub enum AlphaCheck {
    /// Width zero: the exponent is infinite and the step bound is checked pointwise instead.
    StepCase,
    /// No λ in the window has `F̂ > F(0)`: numerically `α̂ = ∞`.
    NoMassNearZero { usable: usize },
    Fitted { alpha_hat: f64, r_squared: f64, points: usize, window: (f64, f64), lower: f64, slack: f64 },
}

impl AlphaCheck {
    pub fn passes(&self) -> bool {
        match self {
            AlphaCheck::StepCase | AlphaCheck::NoMassNearZero { .. } => true,
            AlphaCheck::Fitted { alpha_hat, lower, slack, .. } => *alpha_hat >= lower - slack,
        }
    }
}

impl Verdict {
    pub fn bound_holds(&self) -> bool {
        self.worst_margin >= -self.tolerance
    }

    pub fn passes(&self) -> bool {
        self.bound_holds() && self.alpha.passes()
    }
}

/// Compares `curve` to `scale·bound` and fits the small-`λ` exponent.
pub fn judge(
    curve: &DensityCurve,
    report: &BoundReport,
    scale: f64,
    tolerance: f64,
    window: Option<(f64, f64)>,
    slack: f64,
) -> Result<Verdict, CliError> {
    let (worst_lambda, worst_margin) = curve
        .lambdas
        .iter()
        .zip(curve.excess())
        .map(|(&l, e)| (l, scale * report.bound_at(l) - e))
        .fold((curve.lambdas[0], f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    let alpha = match report.alpha_lower {
        AlphaLower::InfiniteType => AlphaCheck::StepCase,
        AlphaLower::Finite { value, .. } => match window.or_else(|| default_alpha_window(curve)) {
            None => AlphaCheck::NoMassNearZero { usable: 0 },
            Some(w) => match alpha_fit(curve, w) {
                Ok(fit) => AlphaCheck::Fitted {
                    alpha_hat: fit.alpha_hat,
                    r_squared: fit.r_squared,
                    points: fit.points_used,
                    window: w,
                    lower: value,
                    slack,
                },
                Err(DensityError::InsufficientPoints { usable }) => AlphaCheck::NoMassNearZero { usable },
                Err(e) => return Err(e.into()),
            },
        },
    };
    Ok(Verdict { worst_margin, worst_lambda, tolerance, alpha })
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if !(args.bound_scale > 0.0 && args.bound_scale.is_finite()) {
        return Err(CliError::Usage("--bound-scale must be positive".into()));
    }
    let (a, report) = analyzed(&args.file, &args.analysis)?;
    let cfg = RunConfig::resolve(&args.density, a.dim(), report.params.lead_abs)?;
    let curve = cfg.density(&a, report.params.k)?;
    if let Some(path) = &args.out {
        write_csv_file(path, &curve, &report)?;
    }
    let window = args.alpha_min.zip(args.alpha_max);
    let v = judge(&curve, &report, args.bound_scale, cfg.tolerance(), window, args.alpha_slack)?;
    let mut text = String::new();
    use std::fmt::Write as _;
    let _ = writeln!(text, "{}", crate::report::summary_line(&report));
    let _ = writeln!(text, "nodes             {} ({} per axis)", curve.samples, cfg.per_axis);
    let _ = writeln!(text, "bound scale       {}", args.bound_scale);
    let _ = writeln!(text, "eps_quad          {}", v.tolerance);
    let _ = writeln!(text, "worst margin      {} at λ = {}", v.worst_margin, v.worst_lambda);
    let _ = writeln!(text, "bound             {}", if v.bound_holds() { "consistent" } else { "VIOLATED" });
    let alpha_line = match &v.alpha {
        AlphaCheck::StepCase => "step case, exponent infinite; checked through the step bound".to_string(),
        AlphaCheck::NoMassNearZero { usable } => format!(
            "F_hat - F(0) vanishes near zero ({usable} usable points): alpha_hat = inf >= {}",
            alpha_text(&report.alpha_lower)
        ),
        AlphaCheck::Fitted { alpha_hat, r_squared, points, window, lower, slack } => format!(
            "alpha_hat = {alpha_hat} (r^2 = {r_squared}, {points} points in [{}, {}]) vs lower bound {} - {slack}: {}",
            window.0,
            window.1,
            lower,
            if v.alpha.passes() { "ok" } else { "TOO SMALL" }
        ),
    };
    let _ = writeln!(text, "alpha             {alpha_line}");
    let _ = writeln!(text, "verdict           {}", if v.passes() { "PASS" } else { "FAIL" });
    out.write_all(text.as_bytes()).map_err(stdout_error)?;
    Ok(if v.passes() { exit::OK } else { exit::FAILED })
}
