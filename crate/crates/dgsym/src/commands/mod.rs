//! The five commands. Each returns an [`Outcome`](crate::Outcome) or a [`CliError`].

mod classify;
mod gauge;
mod linearize;
mod simulate;
mod verify;

pub use classify::{classify_report, run as classify};
pub use gauge::run as gauge;
pub use linearize::run as linearize;
pub use simulate::run as simulate;
pub use verify::run as verify;

use dgsym_core::pde::Boundary;
use dgsym_core::Grid;

use crate::config::{Cli, Command};
use crate::{CliError, GridArg, Outcome, RunConfig};

/// Runs a parsed command line.
pub fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    cli.config.validate()?;
    let cfg = &cli.config;
    match &cli.command {
        Command::Classify(a) => classify(cfg, a),
        Command::Verify(a) => verify(cfg, a),
        Command::Simulate(a) => simulate(cfg, a),
        Command::Linearize(a) => linearize(cfg, a),
        Command::Gauge(a) => gauge(cfg, a),
    }
}

/// Centred grid from `--grid`, or `fallback` when the flag is absent.
fn grid_from(
    cfg: &RunConfig,
    dim: usize,
    fallback: GridArg,
    boundary: Boundary,
    dt: impl FnOnce(f64) -> f64,
) -> Result<Grid, CliError> {
    if !(1..=2).contains(&dim) {
        return Err(CliError::Input(format!("grids support n = 1 or 2, got n = {dim}")));
    }
    let spec = cfg.grid.unwrap_or(fallback);
    let dt = cfg.dt.unwrap_or_else(|| dt(spec.dx));
    Grid::centered(dim, spec.points, spec.dx, boundary, dt).map_err(|e| CliError::Input(e.to_string()))
}

/// Default grid of the convergence studies: 64 nodes on `[-4, 4]`.
const STUDY_GRID: GridArg = GridArg { points: 64, dx: 8.0 / 63.0 };

/// Whether a convergence ratio is acceptable for order 2: within `tol` of 4 (default 1).
fn ratio_ok(ratio: f64, tol: Option<f64>) -> bool {
    (ratio - 4.0).abs() <= tol.unwrap_or(1.0)
}
