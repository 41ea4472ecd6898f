use dgsym_core::linearize::gauge_act_field;
use dgsym_core::params::{classify, compute_invariants, gauge_act_params, gauge_inverse, parse_rational};
use dgsym_core::GaugeElement;
use serde_json::json;

use crate::config::GaugeArgs;
use crate::io::{
    load_params, params_from_json, params_to_json, parse_boundary, read_snapshot, read_trajectory, write_snapshot,
    write_trajectory, MANIFEST,
};
use crate::{CliError, Outcome, RunConfig};

/// `gauge`: transforms parameters and, optionally, a snapshot or trajectory.
pub fn run(cfg: &RunConfig, args: &GaugeArgs) -> Result<Outcome, CliError> {
    let trajectory = match &args.field {
        Some(src) if src.join(MANIFEST).is_file() => Some(read_trajectory(src)?),
        _ => None,
    };
    let p = match (&cfg.params, &trajectory) {
        (Some(path), _) => load_params(path)?,
        (None, Some((manifest, _))) => params_from_json(&manifest.params.to_string())?,
        (None, None) => return Err(CliError::Input("--params FILE is required".into())),
    };
    let lambda = cfg.lambda.as_deref().ok_or_else(|| CliError::Input("--lambda is required".into()))?;
    let gamma = cfg.gamma.as_deref().unwrap_or("0");
    let g = GaugeElement::new(parse_rational(lambda)?, parse_rational(gamma)?)?;
    let image = gauge_act_params(&g, &p);
    let preserved = compute_invariants(&image) == compute_invariants(&p) && classify(&image) == classify(&p);
    let inv = gauge_inverse(&g);
    let mut report = json!({
        "command": "gauge",
        "status": if preserved { "pass" } else { "fail" },
        "g": { "Lambda": g.lambda().to_string(), "gamma": g.gamma().to_string() },
        "inverse": { "Lambda": inv.lambda().to_string(), "gamma": inv.gamma().to_string() },
        "params": params_to_json(&image),
        "class": classify(&image).to_string(),
        "invariants_preserved": preserved,
    });
    let mut summary =
        vec![format!("class {} -> {}, invariants preserved: {preserved}", classify(&p), classify(&image))];
    if let Some(src) = &args.field {
        let out = cfg.out.as_ref().ok_or_else(|| CliError::Input("--field needs --out".into()))?;
        if let Some((_, traj)) = &trajectory {
            let moved = traj.map(|f| Ok(gauge_act_field(&g, f)))?;
            let manifest = write_trajectory(out, &moved, &image)?;
            report["field_out"] = manifest.display().to_string().into();
        } else {
            let field = read_snapshot(src, parse_boundary(&args.boundary)?, 1.0)?;
            write_snapshot(out, &gauge_act_field(&g, &field))?;
            report["field_out"] = out.display().to_string().into();
        }
        summary.push(format!("wrote {}", report["field_out"].as_str().unwrap_or("")));
    }
    Ok(Outcome { reports: vec![report], passed: preserved, summary, input_errors: 0 })
}
