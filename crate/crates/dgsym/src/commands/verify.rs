use std::str::FromStr;

use dgsym_core::params::{classify, compute_invariants, gauge_act_params, rat, Subfamily, SymmetryClass};
use dgsym_core::pde::{Boundary, LogCoshProfile, SelfSimilar, Solution};
use dgsym_core::symmetry::{
    determining_residuals, finite_basis, generator_field, sample_polynomials, verify_commutator_table,
    verify_symmetry_flow, FlowSource, RowStatus, VerifyOptions,
};
use dgsym_core::{DgParams, Error, GaugeElement, GeneratorName, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{grid_from, ratio_ok, STUDY_GRID};
use crate::config::{SolutionKind, Suite, VerifyArgs};
use crate::io::load_params;
use crate::{number, CliError, Outcome, RunConfig};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

struct Check {
    suite: &'static str,
    name: String,
    status: Status,
    detail: Value,
}

impl Check {
    fn report(&self) -> Value {
        let mut v = json!({ "suite": self.suite, "check": self.name, "status": self.status.as_str() });
        if let (Some(obj), Value::Object(extra)) = (v.as_object_mut(), &self.detail) {
            obj.extend(extra.clone());
        }
        v
    }
}

/// Built-in point of a subfamily: the representative of its generic class.
fn subfamily_point(s: Subfamily, n: usize) -> DgParams {
    let class = match s {
        Subfamily::GalSub => SymmetryClass::Sym1,
        Subfamily::FinSub => SymmetryClass::Sym2,
        Subfamily::InfSub => SymmetryClass::Sym0a,
        Subfamily::InfaSub => SymmetryClass::Sym2a,
        Subfamily::EhrSub => SymmetryClass::Sym1b,
        Subfamily::ExpSub => SymmetryClass::Sym4,
    };
    class.representative(n)
}

fn point(cfg: &RunConfig, args: &VerifyArgs) -> Result<DgParams, CliError> {
    if args.n == 0 {
        return Err(CliError::Input("--n must be at least 1".into()));
    }
    if let Some(c) = &args.class {
        return Ok(SymmetryClass::from_str(c)?.representative(args.n));
    }
    if let Some(s) = &args.subfamily {
        return Ok(subfamily_point(Subfamily::from_str(s)?, args.n));
    }
    match &cfg.params {
        Some(path) => load_params(path),
        None => Err(CliError::Input("give --params FILE, --class or --subfamily".into())),
    }
}

/// Parses a generator name; `Z` generators at points without the matching linearization
/// become `None` (they are reported as skipped).
fn parse_generator(text: &str, p: &DgParams) -> Result<Option<GeneratorName>, CliError> {
    match GeneratorName::parse(text, p) {
        Ok(g) => Ok(Some(g)),
        Err(_)
            if text.trim().starts_with('Z') && !matches!(classify(p), SymmetryClass::Sym1b | SymmetryClass::Sym1c) =>
        {
            Ok(None)
        }
        Err(Error::HeatMismatch(_)) => Ok(None),
        Err(Error::InvalidArgument(m)) if m.contains("has no Schroedinger solution") => Ok(None),
        Err(e) => Err(CliError::Input(e.to_string())),
    }
}

fn skipped_generator(suite: &'static str, name: &str, p: &DgParams) -> Check {
    Check {
        suite,
        name: name.trim().to_string(),
        status: Status::Skipped,
        detail: json!({ "reason": format!("no such generator at a {} point", classify(p)) }),
    }
}

fn commutators(p: &DgParams) -> Vec<Check> {
    verify_commutator_table(p)
        .rows
        .into_iter()
        .map(|row| {
            let (status, detail) = match &row.status {
                RowStatus::Pass => (Status::Pass, json!({ "instances": row.instances })),
                RowStatus::Fail { instance, got, expected } => (
                    Status::Fail,
                    json!({ "instances": row.instances, "instance": instance, "got": got, "expected": expected }),
                ),
                RowStatus::Skipped(why) => (Status::Skipped, json!({ "reason": why })),
            };
            Check { suite: "commutators", name: row.relation, status, detail }
        })
        .collect()
}

fn default_generators(p: &DgParams) -> Vec<GeneratorName> {
    let mut gens = finite_basis(p);
    if Subfamily::ExpSub.holds(p) && !gens.contains(&GeneratorName::F) {
        gens.push(GeneratorName::F);
    }
    if Subfamily::InfSub.holds(p) {
        gens.extend(sample_polynomials().into_iter().map(GeneratorName::Yf));
    }
    gens
}

fn determining(p: &DgParams, requested: &[String]) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for (text, g) in generators(p, requested)? {
        let Some(g) = g else {
            checks.push(skipped_generator("determining", &text, p));
            continue;
        };
        let field = match generator_field(&g, p) {
            Ok(x) => x,
            Err(Error::NotSymbolic(_)) => {
                checks.push(Check {
                    suite: "determining",
                    name: text,
                    status: Status::Skipped,
                    detail: json!({ "reason": "coefficients have no symbolic form" }),
                });
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let residuals = determining_residuals(p, &field)?;
        let nonzero: Vec<String> =
            residuals.iter().filter(|r| !r.value.is_zero()).map(|r| format!("{}: {}", r.equation, r.value)).collect();
        let status = match (g.is_admissible(p), nonzero.is_empty()) {
            (true, true) => Status::Pass,
            (true, false) => Status::Fail,
            (false, _) => Status::Skipped,
        };
        let mut detail = json!({ "equations": residuals.len(), "nonzero": nonzero });
        if status == Status::Skipped {
            detail["reason"] = format!("not admissible at a {} point", classify(p)).into();
        }
        checks.push(Check { suite: "determining", name: text, status, detail });
    }
    Ok(checks)
}

/// Requested generators in order (`None` where the name has no meaning at `p`), or the
/// default set of the point.
fn generators(p: &DgParams, requested: &[String]) -> Result<Vec<(String, Option<GeneratorName>)>, CliError> {
    if requested.is_empty() {
        return Ok(default_generators(p).into_iter().map(|g| (g.label(), Some(g))).collect());
    }
    requested.iter().map(|t| Ok((t.trim().to_string(), parse_generator(t, p)?))).collect()
}

enum Closed {
    LogCosh(LogCoshProfile),
    SelfSimilar(SelfSimilar),
}

impl Closed {
    fn solution(&self) -> &dyn Solution {
        match self {
            Closed::LogCosh(s) => s,
            Closed::SelfSimilar(s) => s,
        }
    }

    fn t_start(&self) -> f64 {
        match self {
            Closed::LogCosh(_) => 0.1,
            Closed::SelfSimilar(_) => 0.2,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Closed::LogCosh(_) => "logcosh",
            Closed::SelfSimilar(_) => "selfsimilar",
        }
    }
}

fn closed_form(kind: SolutionKind, g: &GeneratorName, p: &DgParams) -> Result<Closed, String> {
    let logcosh = || LogCoshProfile::new(p, vec![0.8; p.n()], 0.1).map(Closed::LogCosh);
    let selfsim = || SelfSimilar::new(p, 1.0, 0.4, 1.0).map(Closed::SelfSimilar);
    let picked = match kind {
        SolutionKind::Logcosh => logcosh(),
        SolutionKind::Selfsimilar => selfsim(),
        SolutionKind::Auto if *g == GeneratorName::A => selfsim().or_else(|_| logcosh()),
        SolutionKind::Auto => logcosh().or_else(|_| selfsim()),
    };
    picked.map_err(|e| e.to_string())
}

fn flows(cfg: &RunConfig, args: &VerifyArgs, p: &DgParams) -> Result<Vec<Check>, CliError> {
    let grid = grid_from(cfg, p.n(), STUDY_GRID, Boundary::Dirichlet, |dx| dx * dx / 8.0)?;
    let eps = if cfg.eps.is_empty() { vec![0.1] } else { cfg.eps.clone() };
    let mut checks = Vec::new();
    for (label, g) in generators(p, &cfg.generators)? {
        let Some(g) = g else {
            checks.push(skipped_generator("flow", &label, p));
            continue;
        };
        for &e in &eps {
            let name = format!("{label} eps={e}");
            let source = match closed_form(args.solution, &g, p) {
                Ok(s) => s,
                Err(why) => {
                    let detail = json!({ "reason": format!("no closed-form solution: {why}") });
                    checks.push(Check { suite: "flow", name, status: Status::Skipped, detail });
                    continue;
                }
            };
            let opts = VerifyOptions { t_start: source.t_start(), ..VerifyOptions::default() };
            log::info!("flow {name} on {} points with {}", grid.len(), source.name());
            let result = verify_symmetry_flow(p, &g, e, FlowSource::Closed(source.solution()), &grid, &opts);
            let check = match result {
                Ok(rep) => {
                    let pass = rep.ratio.is_some_and(|r| ratio_ok(r, cfg.tol));
                    Check {
                        suite: "flow",
                        name,
                        status: if pass { Status::Pass } else { Status::Fail },
                        detail: json!({
                            "generator": label,
                            "eps": e,
                            "solution": source.name(),
                            "baseline_linf": rep.baseline.linf(),
                            "transformed_linf": rep.transformed.linf(),
                            "refined_linf": rep.refined.as_ref().map(|n| n.linf()),
                            "ratio": rep.ratio.map_or(Value::Null, number),
                        }),
                    }
                }
                Err(Error::Inadmissible { class, .. }) => Check {
                    suite: "flow",
                    name,
                    status: Status::Skipped,
                    detail: json!({ "reason": format!("not admissible at a {class} point") }),
                },
                Err(err) => {
                    Check { suite: "flow", name, status: Status::Fail, detail: json!({ "error": err.to_string() }) }
                }
            };
            checks.push(check);
        }
    }
    Ok(checks)
}

fn random_rational(rng: &mut ChaCha8Rng, nonzero: bool) -> Rational {
    loop {
        let v = rat(rng.gen_range(-12..=12), rng.gen_range(1..=7));
        if !(nonzero && v == Rational::from_integer(0.into())) {
            return v;
        }
    }
}

fn gauge_invariance(p: &DgParams, samples: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (iota, class) = (compute_invariants(p), classify(p));
    let mut failure = None;
    for _ in 0..samples {
        let g = GaugeElement::new(random_rational(&mut rng, true), random_rational(&mut rng, false))
            .expect("Lambda is nonzero");
        let moved = gauge_act_params(&g, p);
        if compute_invariants(&moved) != iota || classify(&moved) != class {
            failure = Some(format!("Lambda = {}, gamma = {}", g.lambda(), g.gamma()));
            break;
        }
    }
    Check {
        suite: "gauge",
        name: "invariance".into(),
        status: if failure.is_none() { Status::Pass } else { Status::Fail },
        detail: json!({ "samples": samples, "seed": seed, "counterexample": failure }),
    }
}

/// `verify`: runs the requested suites in a fixed order.
pub fn run(cfg: &RunConfig, args: &VerifyArgs) -> Result<Outcome, CliError> {
    let p = point(cfg, args)?;
    let mut suites = args.suites.clone();
    suites.sort();
    suites.dedup();
    let mut checks = Vec::new();
    for suite in suites {
        match suite {
            Suite::Commutators => checks.extend(commutators(&p)),
            Suite::Determining => checks.extend(determining(&p, &cfg.generators)?),
            Suite::Flow => checks.extend(flows(cfg, args, &p)?),
            Suite::Gauge => checks.push(gauge_invariance(&p, args.samples, cfg.seed)),
        }
    }
    let count = |suite: &str, s: Status| checks.iter().filter(|c| c.suite == suite && c.status == s).count();
    let mut summary = vec![format!("point of class {} (n = {})", classify(&p), p.n())];
    let mut seen: Vec<&str> = checks.iter().map(|c| c.suite).collect();
    seen.dedup();
    for suite in seen {
        let (pass, fail, skip) =
            (count(suite, Status::Pass), count(suite, Status::Fail), count(suite, Status::Skipped));
        summary.push(format!("{suite}: {pass}/{} pass, {fail} fail, {skip} skipped", pass + fail));
    }
    for c in checks.iter().filter(|c| c.status == Status::Fail) {
        summary.push(format!("FAIL {} {}", c.suite, c.name));
    }
    Ok(Outcome {
        passed: checks.iter().all(|c| c.status != Status::Fail),
        reports: checks.iter().map(Check::report).collect(),
        summary,
        input_errors: 0,
    })
}
