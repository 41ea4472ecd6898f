use std::path::Path;

use dgsym_core::linearize::{linearization_data, Branch};
use dgsym_core::params::{canonical_gauge, classify_via_invariants, predicate_report, Subfamily};
use dgsym_core::{params::classify as class_of, params::compute_invariants, DgParams};
use serde_json::{json, Map, Value};

use crate::config::ClassifyArgs;
use crate::io::{load_params, params_to_json};
use crate::{number, CliError, Outcome, RunConfig};

/// Full classification report of one parameter point.
pub fn classify_report(p: &DgParams) -> Value {
    let class = class_of(p);
    let iota = compute_invariants(p);
    let invariants: Map<String, Value> =
        iota.as_array().iter().enumerate().map(|(i, v)| (format!("iota{i}"), v.to_string().into())).collect();
    let preds = predicate_report(p);
    let predicates: Map<String, Value> = Subfamily::ALL.iter().map(|s| (s.to_string(), preds.get(*s).into())).collect();
    let (g, image) = canonical_gauge(p);
    let mut out = json!({
        "class": class.to_string(),
        "algebra": class.algebra(),
        "n": p.n(),
        "params": params_to_json(p),
        "invariants": invariants,
        "invariant_class": classify_via_invariants(p).to_string(),
        "predicates": predicates,
        "holding": preds.holding().iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        "canonical_gauge": {
            "Lambda": g.lambda().to_string(),
            "gamma": g.gamma().to_string(),
            "params": params_to_json(&image),
        },
    });
    if let Ok(d) = linearization_data(p) {
        let obj = out.as_object_mut().expect("report is an object");
        obj.insert("branch".into(), if d.branch == Branch::Real { "heat" } else { "schroedinger" }.into());
        obj.insert("lambda_sq".into(), d.lambda_sq.to_string().into());
        obj.insert("Lambda".into(), d.lambda_cap.map_or(Value::Null, number));
        obj.insert("gamma".into(), number(d.gamma));
        obj.insert("diffusion".into(), d.diffusion.map_or(Value::Null, number));
        obj.insert("se_coefficient".into(), d.se_coefficient.map_or(Value::Null, number));
    }
    out
}

fn one(path: &Path) -> Result<Value, CliError> {
    let p = load_params(path)?;
    let mut report = classify_report(&p);
    report.as_object_mut().expect("report is an object").insert("file".into(), path.display().to_string().into());
    Ok(report)
}

/// `classify`: one report per parameter file.
pub fn run(cfg: &RunConfig, args: &ClassifyArgs) -> Result<Outcome, CliError> {
    let Some(dir) = &args.batch else {
        let report = one(cfg.params_path()?)?;
        let summary = format!("{}: {}", report["file"].as_str().unwrap_or(""), report["class"].as_str().unwrap_or(""));
        return Ok(Outcome { reports: vec![report], passed: true, summary: vec![summary], input_errors: 0 });
    };
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| CliError::Input(format!("cannot list {}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut out = Outcome { passed: true, ..Outcome::default() };
    for path in &files {
        match one(path) {
            Ok(report) => {
                out.summary.push(format!("{}: {}", path.display(), report["class"].as_str().unwrap_or("")));
                out.reports.push(report);
            }
            Err(e) => {
                log::warn!("{e}");
                out.input_errors += 1;
                out.summary.push(format!("{}: {e}", path.display()));
                out.reports.push(json!({ "file": path.display().to_string(), "error": e.to_string() }));
            }
        }
    }
    out.summary.push(format!("{} file(s), {} error(s)", files.len(), out.input_errors));
    Ok(out)
}
