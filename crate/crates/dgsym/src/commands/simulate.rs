use dgsym_core::params::classify;
use dgsym_core::pde::{evolve, se_gaussian, EvolveOptions, LogCoshProfile, SeMoments, SePacket, Solution};
use dgsym_core::{Error, LogPolarField};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::grid_from;
use crate::config::{InitKind, SimulateArgs};
use crate::io::{load_params, parse_boundary, read_snapshot, write_trajectory};
use crate::{CliError, GridArg, Outcome, RunConfig};

/// `Σ |ψ|² dV`.
fn mass(f: &LogPolarField) -> f64 {
    f.r().iter().map(|r| (2.0 * r).exp()).sum::<f64>() * f.grid().cell_volume()
}

fn max_error(f: &LogPolarField, sol: &dyn Solution) -> Result<f64, CliError> {
    let exact = LogPolarField::from_solution(f.grid(), f.t(), sol)?;
    Ok(f.to_complex().iter().zip(exact.to_complex()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
}

/// `simulate`: RK4 time stepping from packet, profile or file data.
pub fn run(cfg: &RunConfig, args: &SimulateArgs) -> Result<Outcome, CliError> {
    let p = load_params(cfg.params_path()?)?;
    let boundary = parse_boundary(&args.boundary)?;
    if !(args.c_cfl > 0.0) {
        return Err(CliError::Input("--c-cfl must be positive".into()));
    }
    let half_cfl = 0.5 * args.c_cfl;
    let grid = grid_from(cfg, p.n(), GridArg { points: 64, dx: 0.125 }, boundary, |dx| half_cfl * dx * dx)?;
    let mut reference: Option<LogCoshProfile> = None;
    let mut field = match args.init {
        InitKind::Packet => {
            let n = p.n();
            let mut k = vec![0.0; n];
            k[0] = 0.5;
            let packet = se_gaussian(
                1.0,
                SeMoments {
                    background: Complex64::new(1.0, 0.0),
                    background_wavevector: vec![0.0; n],
                    packet: Some(SePacket {
                        amplitude: Complex64::new(0.4, 0.0),
                        center: vec![0.0; n],
                        width: 1.2,
                        wavevector: k,
                    }),
                },
            )?;
            LogPolarField::from_solution(&grid, 0.0, &packet)?
        }
        InitKind::Logcosh => {
            let profile = LogCoshProfile::new(&p, vec![0.8; p.n()], 0.0)
                .map_err(|e| CliError::Inapplicable(format!("{e} (class {})", classify(&p))))?;
            let f = LogPolarField::from_solution(&grid, 0.0, &profile)?;
            reference = Some(profile);
            f
        }
        InitKind::File => {
            let path = args.input.as_ref().ok_or_else(|| CliError::Input("--init file needs --input CSV".into()))?;
            let f = read_snapshot(path, boundary, grid.dt())?;
            if f.grid().dim() != p.n() {
                return Err(CliError::Input(format!(
                    "snapshot has dimension {}, parameters n = {}",
                    f.grid().dim(),
                    p.n()
                )));
            }
            f
        }
    };
    if args.noise != 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let (r, _) = field.values_mut();
        for v in r.iter_mut() {
            *v += args.noise * rng.gen_range(-1.0..1.0);
        }
    }
    let dt = field.grid().dt();
    let steps = args.steps.unwrap_or_else(|| (args.t_end / dt).round() as usize);
    let opts = EvolveOptions {
        c_cfl: args.c_cfl,
        boundary: reference.as_ref().map(|s| s as &dyn Solution),
        record_every: args.record_every,
        ..EvolveOptions::default()
    };
    log::info!("evolving {} nodes for {steps} steps of {dt}", field.grid().len());
    let traj = match evolve(&p, &field, steps, &opts) {
        Ok(t) => t,
        Err(Error::BlowUp { step, value }) => {
            let report = json!({ "command": "simulate", "status": "fail", "blowup_step": step, "max_abs_r": value });
            return Ok(Outcome {
                reports: vec![report],
                passed: false,
                summary: vec![format!("blow-up at step {step} (max |r| = {value:.3e})")],
                input_errors: 0,
            });
        }
        Err(e) => return Err(e.into()),
    };
    let last = traj.last().expect("trajectory holds the initial slice");
    let (m0, m1) = (mass(&field), mass(last));
    let mut report = json!({
        "command": "simulate",
        "status": "pass",
        "class": classify(&p).to_string(),
        "init": format!("{:?}", args.init).to_lowercase(),
        "points": field.grid().len(),
        "dt": dt,
        "steps": steps,
        "t_end": last.t(),
        "snapshots": traj.len(),
        "mass_initial": m0,
        "mass_final": m1,
        "mass_drift": (m1 - m0) / m0,
        "max_abs_r": last.max_abs_r(),
    });
    let mut passed = true;
    let mut summary =
        vec![format!("{} steps to t = {:.4}, relative mass drift {:.2e}", steps, last.t(), (m1 - m0) / m0)];
    if let Some(sol) = &reference {
        let err = max_error(last, sol)?;
        report["reference_error"] = err.into();
        summary.push(format!("max |psi - psi_exact| = {err:.3e}"));
        if let Some(tol) = cfg.tol {
            passed = err <= tol;
        }
    }
    if let Some(dir) = &cfg.out {
        let manifest = write_trajectory(dir, &traj, &p)?;
        report["manifest"] = Value::from(manifest.display().to_string());
        summary.push(format!("wrote {}", manifest.display()));
    }
    if !passed {
        report["status"] = "fail".into();
    }
    Ok(Outcome { reports: vec![report], passed, summary, input_errors: 0 })
}
