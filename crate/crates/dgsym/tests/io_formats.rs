use dgsym::io::{
    params_from_json, params_to_json, read_snapshot, read_snapshot_on, read_trajectory, write_snapshot,
    write_trajectory, GridSpec,
};
use dgsym::CliError;
use dgsym_core::params::{int, rat};
use dgsym_core::pde::Boundary;
use dgsym_core::{DgParams, Grid, LogPolarField, Trajectory};

fn sample_field(grid: &Grid, t: f64) -> LogPolarField {
    LogPolarField::from_fn(grid, t, |x| {
        let y = x.get(1).copied().unwrap_or(0.0);
        (0.3 * (x[0] - 0.2 * y).cos() - 0.1, 1.7 * x[0] + 0.1 * y * y + t)
    })
    .unwrap()
}

#[test]
fn params_accept_strings_integers_and_omitted_zeros() {
    let p = params_from_json(r#"{"n": 2, "nu1": "-1", "mu2": "-1/2", "mu3": 1, "mu5": "1/4"}"#).unwrap();
    let expected = DgParams::builder(2, int(-1)).mu(2, rat(-1, 2)).mu(3, int(1)).mu(5, rat(1, 4)).build().unwrap();
    assert_eq!(p, expected);
    let back = params_from_json(&params_to_json(&p).to_string()).unwrap();
    assert_eq!(back, p);
}

#[test]
fn params_reject_bad_input() {
    for text in [
        r#"{"n": 1, "nu1": "0"}"#,
        r#"{"n": 1, "nu1": "1/0"}"#,
        r#"{"n": 1, "nu1": "one"}"#,
        r#"{"n": 1}"#,
        r#"{"n": 1, "nu1": 1, "mu6": 2}"#,
        r#"{"n": 0, "nu1": 1}"#,
        "not json",
    ] {
        assert!(matches!(params_from_json(text), Err(CliError::Input(_))), "{text}");
    }
}

#[test]
fn snapshots_round_trip_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    for (grid, boundary) in [
        (Grid::line(-3.0, 3.0, 24, Boundary::Dirichlet, 0.01).unwrap(), Boundary::Dirichlet),
        (Grid::line(-3.0, 3.0, 24, Boundary::Periodic, 0.01).unwrap(), Boundary::Periodic),
        (Grid::new(&[-1.0, 0.0], &[1.0, 3.0], &[16, 20], Boundary::Dirichlet, 0.01).unwrap(), Boundary::Dirichlet),
    ] {
        let f = sample_field(&grid, 0.25);
        let path = dir.path().join("f.csv");
        write_snapshot(&path, &f).unwrap();
        let header = std::fs::read_to_string(&path).unwrap().lines().next().unwrap().to_string();
        assert_eq!(header, if grid.dim() == 1 { "x,t,r,s" } else { "x,y,t,r,s" });
        assert_eq!(read_snapshot_on(&path, &grid).unwrap(), f);
        let inferred = read_snapshot(&path, boundary, 0.01).unwrap();
        assert_eq!(inferred.r(), f.r());
        assert_eq!(inferred.s(), f.s());
        for a in 0..grid.dim() {
            assert!((inferred.grid().spacing(a) - grid.spacing(a)).abs() < 1e-12);
            assert_eq!(inferred.grid().points(a), grid.points(a));
        }
    }
}

#[test]
fn malformed_snapshots_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let grid = Grid::line(0.0, 1.0, 16, Boundary::Dirichlet, 0.01).unwrap();
    let cases = [
        "x,r,s\n0,0,0\n",
        "x,t,s,r\n0,0,0,0\n",
        "x,t,r,s\n0,0,zero,0\n",
        "x,t,r,s\n",
        "x,t,r,s\n0,0,0,0\n0.3,0,0,0\n0.5,0,0,0\n",
    ];
    for (i, text) in cases.iter().enumerate() {
        let path = dir.path().join(format!("bad{i}.csv"));
        std::fs::write(&path, text).unwrap();
        assert!(matches!(read_snapshot(&path, Boundary::Dirichlet, 0.01), Err(CliError::Input(_))), "{text}");
        assert!(read_snapshot_on(&path, &grid).is_err());
    }
}

#[test]
fn trajectories_round_trip_with_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let grid = Grid::line(-2.0, 2.0, 20, Boundary::Periodic, 0.05).unwrap();
    let traj = Trajectory::new((0..4).map(|k| sample_field(&grid, 0.05 * k as f64)).collect()).unwrap();
    let p = DgParams::builder(1, rat(3, 2)).nu2(rat(-1, 7)).mu(4, int(2)).build().unwrap();
    write_trajectory(dir.path(), &traj, &p).unwrap();
    let (manifest, back) = read_trajectory(dir.path()).unwrap();
    assert_eq!(back, traj);
    assert_eq!(manifest.grid, GridSpec::of(&grid));
    assert_eq!(manifest.dt, 0.05);
    assert_eq!(params_from_json(&manifest.params.to_string()).unwrap(), p);
    assert_eq!(manifest.snapshots.len(), 4);
}
