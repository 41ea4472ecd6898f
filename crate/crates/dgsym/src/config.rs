//! Command-line grammar and the validated run configuration.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::CliError;

/// `--grid N,dx`: nodes per axis and spacing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridArg {
    /// Nodes per axis.
    pub points: usize,
    /// Node spacing.
    pub dx: f64,
}

impl FromStr for GridArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, dx) = s.split_once(',').ok_or_else(|| format!("expected N,dx, got `{s}`"))?;
        let points = n.trim().parse().map_err(|_| format!("bad point count `{n}`"))?;
        let dx: f64 = dx.trim().parse().map_err(|_| format!("bad spacing `{dx}`"))?;
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(format!("spacing must be positive, got {dx}"));
        }
        Ok(GridArg { points, dx })
    }
}

/// Options shared by all commands.
#[derive(Args, Clone, Debug, Default)]
pub struct RunConfig {
    /// Parameter file (JSON).
    #[arg(long, global = true, value_name = "FILE")]
    pub params: Option<PathBuf>,
    /// Grid as `N,dx` (nodes per axis, spacing), centred at the origin.
    #[arg(long, global = true, value_name = "N,dx")]
    pub grid: Option<GridArg>,
    /// Time step.
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    /// Generator name such as `B:1`, `L:1,2`, `Yf:z^2`, `Zheat`; repeatable.
    #[arg(long = "gen", global = true, value_name = "NAME")]
    pub generators: Vec<String>,
    /// Flow parameter; repeatable.
    #[arg(long, global = true, allow_negative_numbers = true, value_name = "X")]
    pub eps: Vec<f64>,
    /// Gauge parameter Λ (rational).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Gauge parameter γ (rational).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Output directory (or file for `gauge` on a single snapshot).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Half-width of the accepted band around 4 for convergence ratios (default 1); bound on the
    /// reference error for `simulate`.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

impl RunConfig {
    /// Checks that referenced files exist and numeric overrides are positive.
    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(p) = &self.params {
            if !p.is_file() {
                return Err(CliError::Input(format!("parameter file {} does not exist", p.display())));
            }
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Input(format!("--tol must be positive, got {t}")));
            }
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(CliError::Input(format!("--dt must be positive, got {dt}")));
            }
        }
        if self.eps.iter().any(|e| !e.is_finite()) {
            return Err(CliError::Input("--eps must be finite".into()));
        }
        Ok(())
    }

    /// The parameter file, which most commands require.
    pub fn params_path(&self) -> Result<&PathBuf, CliError> {
        self.params.as_ref().ok_or_else(|| CliError::Input("--params FILE is required".into()))
    }
}

/// Symmetry analysis and simulation of the Doebner-Goldin family.
#[derive(Parser, Debug)]
#[command(name = "dgsym", version)]
pub struct Cli {
    /// What to run.
    #[command(subcommand)]
    pub command: Command,
    /// Shared options.
    #[command(flatten)]
    pub config: RunConfig,
}

/// The five commands.
#[derive(Subcommand, Debug)]
pub enum Command {
    /// Gauge invariants, symmetry class and subfamily predicates.
    Classify(ClassifyArgs),
    /// Commutator, determining-equation, flow and gauge checks.
    Verify(VerifyArgs),
    /// Time-stepping from an initial field.
    Simulate(SimulateArgs),
    /// Linearizing transformations for the Sym1b/Sym1c classes.
    Linearize(LinearizeArgs),
    /// Applies a gauge element to parameters and optionally to field data.
    Gauge(GaugeArgs),
}

/// `classify` options.
#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// Classify every `*.json` file in a directory (one report line per file).
    #[arg(long, value_name = "DIR", conflicts_with = "params")]
    pub batch: Option<PathBuf>,
}

/// Check suites of `verify`.
#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    /// Commutation relations of the generators.
    Commutators,
    /// Symbolic residuals of the determining equations.
    Determining,
    /// Flow of a closed-form solution with a grid-convergence study.
    Flow,
    /// Gauge invariance of invariants and class under random gauge elements.
    Gauge,
}

/// Closed forms available to the flow suite.
#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolutionKind {
    /// Self-similar profile for `A`, stationary ln cosh profile otherwise.
    Auto,
    /// Stationary profile `r = r0 + c ln cosh(k·x)`.
    Logcosh,
    /// Self-similar solution (Sym3 points).
    Selfsimilar,
}

/// `verify` options.
#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suites to run; repeatable.
    #[arg(long = "suite", value_enum, default_values_t = [Suite::Commutators, Suite::Determining])]
    pub suites: Vec<Suite>,
    /// Use the built-in representative of a class instead of a parameter file.
    #[arg(long, conflicts_with_all = ["params", "subfamily"])]
    pub class: Option<String>,
    /// Use a built-in point of a subfamily instead of a parameter file.
    #[arg(long, conflicts_with = "params")]
    pub subfamily: Option<String>,
    /// Spatial dimension for `--class` and `--subfamily`.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Closed form used by the flow suite.
    #[arg(long, value_enum, default_value_t = SolutionKind::Auto)]
    pub solution: SolutionKind,
    /// Random gauge elements drawn by the gauge suite.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
}

/// Initial data of `simulate`.
#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitKind {
    /// Gaussian packet on a unit background.
    Packet,
    /// Stationary ln cosh profile; also supplies boundary values and a reference solution.
    Logcosh,
    /// Snapshot CSV given by `--input`.
    File,
}

/// `simulate` options.
#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Number of steps (overrides `--t-end`).
    #[arg(long)]
    pub steps: Option<usize>,
    /// Final time.
    #[arg(long, default_value_t = 0.1)]
    pub t_end: f64,
    /// Initial data.
    #[arg(long, value_enum, default_value_t = InitKind::Packet)]
    pub init: InitKind,
    /// Snapshot CSV for `--init file`.
    #[arg(long, value_name = "CSV")]
    pub input: Option<PathBuf>,
    /// `periodic` or `dirichlet`.
    #[arg(long, default_value = "periodic")]
    pub boundary: String,
    /// Keep every k-th step.
    #[arg(long, default_value_t = 10)]
    pub record_every: usize,
    /// Amplitude of a seeded random perturbation of `r`.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Stability constant in `dt <= c_cfl dx^2`.
    #[arg(long, default_value_t = 0.2)]
    pub c_cfl: f64,
}

/// How `linearize` obtains the DG trajectory in the Schroedinger case.
#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceKind {
    /// Sample the transformed closed form.
    Closed,
    /// Time-step the DG equation from the transformed initial data.
    Evolve,
}

/// `linearize` options.
#[derive(Args, Debug)]
pub struct LinearizeArgs {
    /// Time horizon.
    #[arg(long, default_value_t = 0.2)]
    pub t_end: f64,
    /// Source of the DG trajectory for Sym1c points.
    #[arg(long, value_enum, default_value_t = SourceKind::Closed)]
    pub source: SourceKind,
}

/// `gauge` options.
#[derive(Args, Debug)]
pub struct GaugeArgs {
    /// Snapshot CSV or trajectory directory to transform.
    #[arg(long, value_name = "PATH")]
    pub field: Option<PathBuf>,
    /// Boundary of a standalone snapshot.
    #[arg(long, default_value = "dirichlet")]
    pub boundary: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_argument() {
        assert_eq!("64,0.125".parse::<GridArg>(), Ok(GridArg { points: 64, dx: 0.125 }));
        assert_eq!(" 32 , 1e-1 ".parse::<GridArg>(), Ok(GridArg { points: 32, dx: 0.1 }));
        for bad in ["64", "64,0", "64,-1", "x,0.1", "64,nan"] {
            assert!(bad.parse::<GridArg>().is_err(), "{bad}");
        }
    }

    #[test]
    fn global_flags_follow_the_subcommand() {
        let cli =
            Cli::try_parse_from(["dgsym", "verify", "--suite", "flow", "--gen", "L:1,2", "--eps", "-0.2"]).unwrap();
        assert_eq!(cli.config.generators, ["L:1,2"]);
        assert_eq!(cli.config.eps, [-0.2]);
        let Command::Verify(v) = cli.command else { panic!("verify expected") };
        assert_eq!(v.suites, [Suite::Flow]);
        let cli = Cli::try_parse_from(["dgsym", "gauge", "--lambda", "-1/2", "--gamma", "-3"]).unwrap();
        assert_eq!(cli.config.lambda.as_deref(), Some("-1/2"));
        assert_eq!(cli.config.gamma.as_deref(), Some("-3"));
    }

    #[test]
    fn validation_rejects_nonpositive_overrides() {
        let cfg = RunConfig { tol: Some(0.0), ..RunConfig::default() };
        assert!(matches!(cfg.validate(), Err(CliError::Input(_))));
        let cfg = RunConfig { dt: Some(-1.0), ..RunConfig::default() };
        assert!(cfg.validate().is_err());
        let cfg = RunConfig { params: Some("/nonexistent/p.json".into()), ..RunConfig::default() };
        assert!(cfg.validate().is_err());
        assert!(RunConfig::default().validate().is_ok());
    }
}
