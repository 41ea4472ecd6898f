use dgsym_core::linearize::{
    default_heat_pair, default_se_solution, dg_to_se, gauge_act_field_f64, heat_pair_to_dg, linearization_data,
    se_to_dg_solution, Branch, HeatPair, LinearizationData,
};
use dgsym_core::params::classify;
use dgsym_core::pde::{evolve, residual, se_residual, Boundary, EvolveOptions, HeatSolution};
use dgsym_core::{DgParams, Error, Grid, LogPolarField, Trajectory};
use serde_json::{json, Value};

use super::{grid_from, ratio_ok, STUDY_GRID};
use crate::config::{LinearizeArgs, SourceKind};
use crate::io::{load_params, write_trajectory};
use crate::{number, CliError, Outcome, RunConfig};

fn slices(t_end: f64, dt: f64) -> usize {
    (t_end / dt).round() as usize + 1
}

fn refine(g: &Grid) -> Result<Grid, CliError> {
    Ok(g.with_points(2 * g.points(0))?.with_dt(0.5 * g.dt())?)
}

fn heat_json(h: &HeatSolution) -> Value {
    let m = h.moments();
    json!({
        "direction": format!("{:?}", h.direction()).to_lowercase(),
        "offset": m.offset,
        "amplitude": m.amplitude,
        "center": m.center,
        "width": m.width,
    })
}

struct Study {
    report: Value,
    passed: bool,
    summary: Vec<String>,
    trajectory: Trajectory,
}

fn heat(p: &DgParams, d: &LinearizationData, grid: &Grid, t_end: f64, tol: Option<f64>) -> Result<Study, CliError> {
    let pair: HeatPair = default_heat_pair(p)?;
    let run = |g: &Grid| -> Result<(Trajectory, f64), CliError> {
        let traj = heat_pair_to_dg(&pair, p, g, 0.0, slices(t_end, g.dt()))?;
        let res = residual(p, &traj)?.linf();
        Ok((traj, res))
    };
    let (traj, coarse) = run(grid)?;
    let (_, fine) = run(&refine(grid)?)?;
    let ratio = coarse / fine;
    let passed = ratio_ok(ratio, tol);
    let report = json!({
        "command": "linearize",
        "branch": "heat",
        "status": if passed { "pass" } else { "fail" },
        "class": classify(p).to_string(),
        "lambda_sq": d.lambda_sq.to_string(),
        "gamma": number(d.gamma),
        "diffusion": d.diffusion.map_or(Value::Null, number),
        "phi_plus": heat_json(&pair.plus),
        "phi_minus": heat_json(&pair.minus),
        "residual_linf": coarse,
        "residual_linf_refined": fine,
        "ratio": ratio,
    });
    let summary = vec![format!("heat pair -> DG: residual {coarse:.3e} -> {fine:.3e}, ratio {ratio:.3}")];
    Ok(Study { report, passed, summary, trajectory: traj })
}

fn schroedinger(
    p: &DgParams,
    d: &LinearizationData,
    grid: &Grid,
    args: &LinearizeArgs,
    tol: Option<f64>,
) -> Result<Study, CliError> {
    let sol = default_se_solution(p)?;
    let a = sol.a();
    let dg = se_to_dg_solution(sol, p)?;
    let (lambda, gamma) = d.se_gauge()?;
    let mut round_trip = 0.0f64;
    let mut run = |g: &Grid| -> Result<(Trajectory, f64, f64), CliError> {
        let traj = match args.source {
            SourceKind::Closed => Trajectory::sample(g, &dg, 0.0, slices(args.t_end, g.dt()))?,
            SourceKind::Evolve => {
                let dx = g.min_spacing();
                let g = g.with_dt(g.dt().min(0.1 * dx * dx))?;
                let f0 = LogPolarField::from_solution(&g, 0.0, &dg)?;
                let steps = (args.t_end / g.dt()).round() as usize;
                evolve(p, &f0, steps, &EvolveOptions { boundary: Some(&dg), ..EvolveOptions::default() })?
            }
        };
        let se = traj.map(|f| dg_to_se(f, p))?;
        for (orig, back) in traj.slices.iter().zip(&se.slices) {
            let restored = gauge_act_field_f64(lambda, gamma, back);
            let scale = orig.s().iter().fold(1.0f64, |m, v| m.max(v.abs()));
            let (dr, ds) = restored.max_difference(orig)?;
            round_trip = round_trip.max(dr).max(ds / scale);
        }
        let dg_res = residual(p, &traj)?.linf();
        Ok((traj, se_residual(a, &se)?.linf, dg_res))
    };
    let (traj, coarse, dg_coarse) = run(grid)?;
    let (_, fine, dg_fine) = run(&refine(grid)?)?;
    let ratio = coarse / fine;
    let passed = ratio_ok(ratio, tol) && round_trip <= 1e-12;
    let report = json!({
        "command": "linearize",
        "branch": "schroedinger",
        "status": if passed { "pass" } else { "fail" },
        "class": classify(p).to_string(),
        "source": format!("{:?}", args.source).to_lowercase(),
        "lambda_sq": d.lambda_sq.to_string(),
        "Lambda": number(lambda),
        "gamma": number(gamma),
        "se_coefficient": number(a),
        "se_residual_linf": coarse,
        "se_residual_linf_refined": fine,
        "ratio": ratio,
        "dg_residual_linf": dg_coarse,
        "dg_residual_linf_refined": dg_fine,
        "round_trip_error": round_trip,
    });
    let summary = vec![
        format!("DG -> SE: residual {coarse:.3e} -> {fine:.3e}, ratio {ratio:.3}"),
        format!("inverse gauge restores (r, s) to {round_trip:.1e}"),
    ];
    Ok(Study { report, passed, summary, trajectory: traj })
}

/// `linearize`: generated DG solutions and their residual convergence.
pub fn run(cfg: &RunConfig, args: &LinearizeArgs) -> Result<Outcome, CliError> {
    let p = load_params(cfg.params_path()?)?;
    let d = match linearization_data(&p) {
        Ok(d) => d,
        Err(Error::NotLinearizable(class)) => {
            return Err(CliError::Inapplicable(format!(
            "class {class} admits no linearizing transformation; only Sym1b (heat) and Sym1c (Schroedinger) points do"
        )))
        }
        Err(e) => return Err(e.into()),
    };
    if !(args.t_end > 0.0) {
        return Err(CliError::Input("--t-end must be positive".into()));
    }
    let grid = grid_from(cfg, p.n(), STUDY_GRID, Boundary::Dirichlet, |dx| 0.08 * dx)?;
    let study = match d.branch {
        Branch::Real => heat(&p, &d, &grid, args.t_end, cfg.tol)?,
        Branch::Imaginary => schroedinger(&p, &d, &grid, args, cfg.tol)?,
    };
    let mut report = study.report;
    let mut summary = study.summary;
    if let Some(dir) = &cfg.out {
        let manifest = write_trajectory(dir, &study.trajectory, &p)?;
        report["manifest"] = manifest.display().to_string().into();
        summary.push(format!("wrote {}", manifest.display()));
    }
    Ok(Outcome { reports: vec![report], passed: study.passed, summary, input_errors: 0 })
}
