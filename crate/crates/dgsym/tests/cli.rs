use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const LINEAR_SE: &str =
    r#"{"n": 1, "nu1": "-1", "nu2": "0", "mu0": "0", "mu1": "0", "mu2": "-1/2", "mu3": "1", "mu4": "0", "mu5": "1/4"}"#;
const GALSUB: &str =
    r#"{"n": 1, "nu1": 1, "nu2": "1/2", "mu1": "1/3", "mu2": 2, "mu3": -1, "mu4": "-1/3", "mu5": "1/5"}"#;
const HEAT: &str = r#"{"n": 1, "nu1": 1, "mu2": -1, "mu3": -1, "mu5": "1/2"}"#;
const SE_LAMBDA2: &str =
    r#"{"n": 1, "nu1": 1, "nu2": "1/2", "mu1": 1, "mu2": "5/2", "mu3": -1, "mu4": -1, "mu5": "-5/4"}"#;
const GENERIC: &str =
    r#"{"n": 1, "nu1": 1, "nu2": "1/3", "mu1": "1/5", "mu2": "2/7", "mu3": "3/11", "mu4": "1/13", "mu5": "5/17"}"#;

fn dgsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgsym")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("invalid JSON line {l:?}: {e}")))
        .collect()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_linear_schroedinger_point() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "se.json", LINEAR_SE);
    let out = dgsym(&["classify", "--params", s(&file)]);
    assert_eq!(code(&out), 0);
    let report = &lines(&out)[0];
    assert_eq!(report["class"], "Sym1c");
    assert_eq!(report["Lambda"], 1);
    assert_eq!(report["gamma"], 0);
    assert_eq!(report["invariants"]["iota1"], "1/2");
    assert_eq!(report["algebra"], "(sch_e(n) ⊕ t(1)) ⋉ c∞");
    assert_eq!(report["canonical_gauge"]["Lambda"], "-1");
    assert_eq!(report["predicates"]["EhrSub"], true);
}

#[test]
fn invalid_parameter_files_exit_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write(dir.path(), "zero.json", r#"{"n": 1, "nu1": 0}"#);
    let out = dgsym(&["classify", "--params", s(&zero)]);
    assert_eq!(code(&out), 2);
    assert!(lines(&out)[0]["error"].as_str().unwrap().contains("nu1"));
    let garbage = write(dir.path(), "garbage.json", "{");
    assert_eq!(code(&dgsym(&["classify", "--params", s(&garbage)])), 2);
    assert_eq!(code(&dgsym(&["classify", "--params", s(&dir.path().join("missing.json"))])), 2);
    assert_eq!(code(&dgsym(&["classify", "--frobnicate"])), 2);
}

#[test]
fn batch_mode_emits_one_line_per_file() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.json", LINEAR_SE);
    write(dir.path(), "b.json", GALSUB);
    write(dir.path(), "c.json", GENERIC);
    write(dir.path(), "notes.txt", "ignored");
    let out = dgsym(&["classify", "--batch", s(dir.path())]);
    assert_eq!(code(&out), 0);
    let classes: Vec<_> = lines(&out).iter().map(|r| r["class"].as_str().unwrap().to_string()).collect();
    assert_eq!(classes, ["Sym1c", "Sym1", "Sym0"]);

    write(dir.path(), "d.json", r#"{"n": 1, "nu1": "0"}"#);
    let out = dgsym(&["classify", "--batch", s(dir.path())]);
    assert_eq!(code(&out), 2);
    let reports = lines(&out);
    assert_eq!(reports.len(), 4);
    assert!(reports[3]["error"].is_string());
}

#[test]
fn commutator_suite_passes_at_sym3() {
    // The three rotation rows only exist for n >= 2.
    for (n, passing) in [("1", 14), ("2", 17), ("3", 17)] {
        let out = dgsym(&["verify", "--suite", "commutators", "--class", "Sym3", "--n", n]);
        assert_eq!(code(&out), 0, "n = {n}");
        let reports = lines(&out);
        assert!(reports.iter().all(|r| r["status"] != "fail"));
        assert_eq!(reports.iter().filter(|r| r["status"] == "pass").count(), passing, "n = {n}");
    }
}

#[test]
fn determining_suite_passes_on_every_subfamily() {
    for sub in ["GalSub", "FinSub", "InfSub", "InfaSub", "EhrSub", "ExpSub"] {
        let out = dgsym(&["verify", "--suite", "determining", "--subfamily", sub]);
        assert_eq!(code(&out), 0, "{sub}");
        let reports = lines(&out);
        assert!(!reports.is_empty());
        for r in &reports {
            assert_eq!(r["status"], "pass", "{sub}: {r}");
            assert_eq!(r["nonzero"].as_array().unwrap().len(), 0);
        }
    }
}

#[test]
fn inadmissible_generators_are_skipped_not_failed() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "g.json", GENERIC);
    let out = dgsym(&[
        "verify",
        "--suite",
        "determining",
        "--suite",
        "flow",
        "--params",
        s(&file),
        "--gen",
        "C",
        "--gen",
        "B:1",
    ]);
    assert_eq!(code(&out), 0);
    let reports = lines(&out);
    assert_eq!(reports.len(), 4);
    assert!(reports.iter().all(|r| r["status"] == "skipped"));
    assert!(!reports[0]["nonzero"].as_array().unwrap().is_empty());
}

#[test]
fn flow_suite_reports_second_order_convergence() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "gal.json", GALSUB);
    let out = dgsym(&["verify", "--suite", "flow", "--params", s(&file), "--gen", "B:1", "--eps", "0.3"]);
    assert_eq!(code(&out), 0);
    let r = &lines(&out)[0];
    assert_eq!(r["status"], "pass");
    let ratio = r["ratio"].as_f64().unwrap();
    assert!((3.0..=5.0).contains(&ratio), "{ratio}");

    // An impossible band turns the same run into a check failure.
    let out =
        dgsym(&["verify", "--suite", "flow", "--params", s(&file), "--gen", "B:1", "--eps", "0.3", "--tol", "1e-6"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn unknown_generator_is_an_input_error() {
    let out = dgsym(&["verify", "--suite", "flow", "--class", "Sym1", "--gen", "Q"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn gauge_suite_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "g.json", GENERIC);
    let run = |seed: &str| dgsym(&["verify", "--suite", "gauge", "--params", s(&file), "--seed", seed]).stdout;
    assert_eq!(run("7"), run("7"));
    let out = dgsym(&["verify", "--suite", "gauge", "--params", s(&file)]);
    assert_eq!(code(&out), 0);
}

#[test]
fn linearize_heat_branch() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "heat.json", HEAT);
    let traj = dir.path().join("traj");
    let out = dgsym(&["linearize", "--params", s(&file), "--out", s(&traj)]);
    assert_eq!(code(&out), 0);
    let r = &lines(&out)[0];
    assert_eq!(r["branch"], "heat");
    assert!((3.0..=5.0).contains(&r["ratio"].as_f64().unwrap()));
    let (manifest, t) = dgsym::io::read_trajectory(&traj).unwrap();
    assert_eq!(manifest.snapshots.len(), t.len());
    assert!(t.len() > 3);
}

#[test]
fn linearize_schroedinger_branch_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "se.json", SE_LAMBDA2);
    for source in ["closed", "evolve"] {
        let out = dgsym(&["linearize", "--params", s(&file), "--source", source, "--t-end", "0.05"]);
        assert_eq!(code(&out), 0, "{source}");
        let r = &lines(&out)[0];
        assert_eq!(r["Lambda"], 2);
        assert!(r["round_trip_error"].as_f64().unwrap() <= 1e-12);
        assert!((3.0..=5.0).contains(&r["ratio"].as_f64().unwrap()), "{source}: {r}");
    }
}

#[test]
fn linearize_rejects_non_ehrenfest_points_with_code_3() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "g.json", GENERIC);
    let out = dgsym(&["linearize", "--params", s(&file)]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("Sym0"));
}

#[test]
fn simulate_is_deterministic_and_writes_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "gal.json", GALSUB);
    let run = |name: &str| {
        let out_dir = dir.path().join(name);
        let out = dgsym(&[
            "simulate",
            "--params",
            s(&file),
            "--t-end",
            "0.02",
            "--noise",
            "1e-3",
            "--seed",
            "11",
            "--out",
            s(&out_dir),
        ]);
        assert_eq!(code(&out), 0);
        dgsym::io::read_trajectory(&out_dir).unwrap().1
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn simulate_logcosh_tracks_the_reference() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "gal.json", GALSUB);
    let out = dgsym(&[
        "simulate",
        "--params",
        s(&file),
        "--init",
        "logcosh",
        "--boundary",
        "dirichlet",
        "--t-end",
        "0.05",
        "--tol",
        "1e-3",
    ]);
    assert_eq!(code(&out), 0);
    assert!(lines(&out)[0]["reference_error"].as_f64().unwrap() < 1e-3);
}

#[test]
fn simulate_rejects_an_unstable_time_step() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "gal.json", GALSUB);
    assert_eq!(code(&dgsym(&["simulate", "--params", s(&file), "--dt", "0.1"])), 2);
}

#[test]
fn gauge_and_its_inverse_restore_parameters_and_fields() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "heat.json", HEAT);
    let traj = dir.path().join("traj");
    assert_eq!(code(&dgsym(&["linearize", "--params", s(&file), "--out", s(&traj)])), 0);

    let moved = dir.path().join("moved");
    let out = dgsym(&["gauge", "--lambda", "2/3", "--gamma", "-5", "--field", s(&traj), "--out", s(&moved)]);
    assert_eq!(code(&out), 0);
    let r = &lines(&out)[0];
    assert_eq!(r["invariants_preserved"], true);
    assert_eq!(r["inverse"]["Lambda"], "3/2");
    assert_eq!(r["inverse"]["gamma"], "15/2");

    let back = dir.path().join("back");
    let out = dgsym(&["gauge", "--lambda", "3/2", "--gamma", "15/2", "--field", s(&moved), "--out", s(&back)]);
    assert_eq!(code(&out), 0);
    let (m0, t0) = dgsym::io::read_trajectory(&traj).unwrap();
    let (m1, t1) = dgsym::io::read_trajectory(&back).unwrap();
    assert_eq!(m0.params, m1.params);
    for (a, b) in t0.slices.iter().zip(&t1.slices) {
        let (dr, ds) = a.max_difference(b).unwrap();
        assert_eq!(dr, 0.0);
        assert!(ds < 1e-12);
    }
}

#[test]
fn singular_gauge_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "g.json", GALSUB);
    assert_eq!(code(&dgsym(&["gauge", "--params", s(&file), "--lambda", "0"])), 2);
    assert_eq!(code(&dgsym(&["gauge", "--params", s(&file)])), 2);
}

#[test]
fn log_level_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_dgsym"))
        .args(["verify", "--suite", "flow", "--class", "Sym1", "--gen", "H"])
        .env("DGSYM_LOG", "info")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("INFO"));
}
