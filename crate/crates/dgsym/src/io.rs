//! File formats: parameter JSON, field snapshot CSV and trajectory directories.

use std::fs;
use std::path::{Path, PathBuf};

use dgsym_core::params::parse_rational;
use dgsym_core::pde::Boundary;
use dgsym_core::{DgParams, Grid, LogPolarField, Rational, Trajectory};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// A rational written either as a JSON integer or as a string `"p/q"`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum RationalText {
    Int(i64),
    Text(String),
}

impl RationalText {
    fn parse(&self, key: &str) -> Result<Rational, CliError> {
        match self {
            RationalText::Int(v) => Ok(Rational::from_integer((*v).into())),
            RationalText::Text(s) => parse_rational(s).map_err(|e| CliError::Input(format!("field `{key}`: {e}"))),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamFile {
    n: usize,
    nu1: RationalText,
    #[serde(default)]
    nu2: Option<RationalText>,
    #[serde(default)]
    mu0: Option<RationalText>,
    #[serde(default)]
    mu1: Option<RationalText>,
    #[serde(default)]
    mu2: Option<RationalText>,
    #[serde(default)]
    mu3: Option<RationalText>,
    #[serde(default)]
    mu4: Option<RationalText>,
    #[serde(default)]
    mu5: Option<RationalText>,
}

/// Parses a parameter object. Omitted coefficients other than `n` and `nu1` default to zero.
pub fn params_from_json(text: &str) -> Result<DgParams, CliError> {
    let file: ParamFile = serde_json::from_str(text).map_err(|e| CliError::Input(format!("parameter file: {e}")))?;
    let opt = |v: &Option<RationalText>, key: &str| match v {
        Some(v) => v.parse(key),
        None => Ok(Rational::from_integer(0.into())),
    };
    let nu = [file.nu1.parse("nu1")?, opt(&file.nu2, "nu2")?];
    let mu = [
        opt(&file.mu0, "mu0")?,
        opt(&file.mu1, "mu1")?,
        opt(&file.mu2, "mu2")?,
        opt(&file.mu3, "mu3")?,
        opt(&file.mu4, "mu4")?,
        opt(&file.mu5, "mu5")?,
    ];
    DgParams::new(file.n, nu, mu).map_err(|e| CliError::Input(e.to_string()))
}

/// Reads a parameter file.
pub fn load_params(path: &Path) -> Result<DgParams, CliError> {
    let text = read(path)?;
    params_from_json(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// JSON object with every coefficient as an exact string.
pub fn params_to_json(p: &DgParams) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    map.insert("n".into(), p.n().into());
    map.insert("nu1".into(), p.nu1().to_string().into());
    map.insert("nu2".into(), p.nu2().to_string().into());
    for k in 0..6 {
        map.insert(format!("mu{k}"), p.mu(k).to_string().into());
    }
    serde_json::Value::Object(map)
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Serializable description of a [`Grid`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Lower corner.
    pub lo: Vec<f64>,
    /// Upper corner (identified with `lo` on periodic grids).
    pub hi: Vec<f64>,
    /// Nodes per axis.
    pub points: Vec<usize>,
    /// `"periodic"` or `"dirichlet"`.
    pub boundary: String,
}

impl GridSpec {
    /// Describes `g`.
    pub fn of(g: &Grid) -> Self {
        let axes = 0..g.dim();
        GridSpec {
            lo: axes.clone().map(|a| g.lo(a)).collect(),
            hi: axes.clone().map(|a| g.hi(a)).collect(),
            points: axes.map(|a| g.points(a)).collect(),
            boundary: boundary_name(g.boundary()).into(),
        }
    }

    /// Rebuilds the grid with time step `dt`.
    pub fn build(&self, dt: f64) -> Result<Grid, CliError> {
        Grid::new(&self.lo, &self.hi, &self.points, parse_boundary(&self.boundary)?, dt)
            .map_err(|e| CliError::Input(e.to_string()))
    }
}

/// Lower-case boundary name used in files and flags.
pub fn boundary_name(b: Boundary) -> &'static str {
    match b {
        Boundary::Periodic => "periodic",
        Boundary::Dirichlet => "dirichlet",
    }
}

/// Inverse of [`boundary_name`].
pub fn parse_boundary(s: &str) -> Result<Boundary, CliError> {
    match s.trim().to_ascii_lowercase().as_str() {
        "periodic" => Ok(Boundary::Periodic),
        "dirichlet" => Ok(Boundary::Dirichlet),
        other => Err(CliError::Input(format!("unknown boundary `{other}`"))),
    }
}

fn header(dim: usize) -> &'static [&'static str] {
    if dim == 1 {
        &["x", "t", "r", "s"]
    } else {
        &["x", "y", "t", "r", "s"]
    }
}

/// Writes one snapshot as CSV with header `x[,y],t,r,s`, `x` varying fastest.
pub fn write_snapshot(path: &Path, field: &LogPolarField) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    let g = field.grid();
    w.write_record(header(g.dim())).map_err(|e| io_err(path, e))?;
    let mut x = [0.0; 2];
    for k in 0..g.len() {
        g.point(k, &mut x);
        let mut row: Vec<String> = x[..g.dim()].iter().map(f64::to_string).collect();
        row.extend([field.t(), field.r()[k], field.s()[k]].iter().map(f64::to_string));
        w.write_record(&row).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

struct Row {
    x: [f64; 2],
    t: f64,
    r: f64,
    s: f64,
}

fn read_rows(path: &Path) -> Result<(usize, Vec<Row>), CliError> {
    let bad = |msg: String| CliError::Input(format!("{}: {msg}", path.display()));
    let mut rd = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let head: Vec<String> =
        rd.headers().map_err(|e| bad(e.to_string()))?.iter().map(|h| h.trim().to_string()).collect();
    let dim = match head.len() {
        4 => 1,
        5 => 2,
        _ => return Err(bad(format!("unexpected header {head:?}"))),
    };
    if head != header(dim) {
        return Err(bad(format!("header must be {:?}, got {head:?}", header(dim))));
    }
    let mut rows = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let v: Vec<f64> = rec
            .iter()
            .map(|c| c.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| bad(format!("row {}: {e}", i + 2)))?;
        let mut x = [0.0; 2];
        x[..dim].copy_from_slice(&v[..dim]);
        rows.push(Row { x, t: v[dim], r: v[dim + 1], s: v[dim + 2] });
    }
    if rows.is_empty() {
        return Err(bad("no data rows".into()));
    }
    Ok((dim, rows))
}

/// Reads a snapshot written on `grid`; every node must appear exactly once.
pub fn read_snapshot_on(path: &Path, grid: &Grid) -> Result<LogPolarField, CliError> {
    let (dim, rows) = read_rows(path)?;
    let bad = |msg: String| CliError::Input(format!("{}: {msg}", path.display()));
    if dim != grid.dim() || rows.len() != grid.len() {
        return Err(bad(format!("expected {} rows in {} dimension(s)", grid.len(), grid.dim())));
    }
    let t = rows[0].t;
    let (mut r, mut s) = (vec![0.0; grid.len()], vec![0.0; grid.len()]);
    let mut seen = vec![false; grid.len()];
    for row in &rows {
        if row.t != t {
            return Err(bad("rows carry different times".into()));
        }
        let idx = |a: usize| -> Result<usize, CliError> {
            let h = grid.spacing(a);
            let f = (row.x[a] - grid.lo(a)) / h;
            let i = f.round();
            if (f - i).abs() > 1e-6 || i < 0.0 || i as usize >= grid.points(a) {
                return Err(bad(format!("coordinate {} is not a grid node", row.x[a])));
            }
            Ok(i as usize)
        };
        let k = grid.index(idx(0)?, if dim == 2 { idx(1)? } else { 0 });
        if std::mem::replace(&mut seen[k], true) {
            return Err(bad(format!("node {k} appears twice")));
        }
        r[k] = row.r;
        s[k] = row.s;
    }
    LogPolarField::new(grid.clone(), t, r, s).map_err(|e| bad(e.to_string()))
}

/// Reads a standalone snapshot, inferring the grid from its coordinates.
pub fn read_snapshot(path: &Path, boundary: Boundary, dt: f64) -> Result<LogPolarField, CliError> {
    let (dim, rows) = read_rows(path)?;
    let bad = |msg: String| CliError::Input(format!("{}: {msg}", path.display()));
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    let mut points = Vec::new();
    for a in 0..dim {
        let mut xs: Vec<f64> = rows.iter().map(|r| r.x[a]).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        if xs.len() < 2 {
            return Err(bad(format!("axis {a} has a single coordinate")));
        }
        let h = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
        if xs.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-6 * h) {
            return Err(bad(format!("axis {a} is not uniformly spaced")));
        }
        lo.push(xs[0]);
        hi.push(match boundary {
            Boundary::Periodic => xs[xs.len() - 1] + h,
            Boundary::Dirichlet => xs[xs.len() - 1],
        });
        points.push(xs.len());
    }
    let grid = Grid::new(&lo, &hi, &points, boundary, dt).map_err(|e| bad(e.to_string()))?;
    read_snapshot_on(path, &grid)
}

/// Manifest of a trajectory directory.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    /// Spatial grid shared by all snapshots.
    pub grid: GridSpec,
    /// Parameters of the equation.
    pub params: serde_json::Value,
    /// Time step of the underlying computation.
    pub dt: f64,
    /// Snapshot files relative to the directory, in time order.
    pub snapshots: Vec<SnapshotEntry>,
}

/// One snapshot listed in a [`Manifest`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SnapshotEntry {
    /// File name.
    pub file: String,
    /// Time of the snapshot.
    pub t: f64,
}

/// File name of the manifest inside a trajectory directory.
pub const MANIFEST: &str = "manifest.json";

/// Writes `traj` to `dir` as numbered CSV snapshots plus a manifest.
pub fn write_trajectory(dir: &Path, traj: &Trajectory, p: &DgParams) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let first = traj.slices.first().ok_or_else(|| CliError::Io("empty trajectory".into()))?;
    let mut snapshots = Vec::with_capacity(traj.len());
    for (i, f) in traj.slices.iter().enumerate() {
        let file = format!("snapshot_{i:05}.csv");
        write_snapshot(&dir.join(&file), f)?;
        snapshots.push(SnapshotEntry { file, t: f.t() });
    }
    let manifest =
        Manifest { grid: GridSpec::of(first.grid()), params: params_to_json(p), dt: first.grid().dt(), snapshots };
    let path = dir.join(MANIFEST);
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| io_err(&path, e))?;
    fs::write(&path, text + "\n").map_err(|e| io_err(&path, e))?;
    Ok(path)
}

/// Reads a trajectory directory written by [`write_trajectory`].
pub fn read_trajectory(dir: &Path) -> Result<(Manifest, Trajectory), CliError> {
    let path = dir.join(MANIFEST);
    let manifest: Manifest =
        serde_json::from_str(&read(&path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let grid = manifest.grid.build(manifest.dt)?;
    let slices = manifest
        .snapshots
        .iter()
        .map(|e| read_snapshot_on(&dir.join(&e.file), &grid))
        .collect::<Result<Vec<_>, _>>()?;
    let traj = Trajectory::new(slices).map_err(|e| CliError::Input(e.to_string()))?;
    Ok((manifest, traj))
}
