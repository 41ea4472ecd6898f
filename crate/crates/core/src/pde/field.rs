use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::grid::{Boundary, Grid};
use super::solutions::Solution;
use crate::error::{Error, Result};

/// Wraps an angle difference into `(-π, π]`.
pub fn wrap_angle(d: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let w = d - two_pi * libm::round(d / two_pi);
    if w <= -PI {
        w + two_pi
    } else {
        w
    }
}

/// Log-polar samples `r = ln|psi|`, `s = arg psi` (unwrapped) on a grid at time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogPolarField {
    grid: Grid,
    t: f64,
    r: Vec<f64>,
    s: Vec<f64>,
}

impl LogPolarField {
    /// Wraps sample vectors; lengths must match the grid and values must be finite.
    pub fn new(grid: Grid, t: f64, r: Vec<f64>, s: Vec<f64>) -> Result<Self> {
        if r.len() != grid.len() || s.len() != grid.len() {
            return Err(Error::InvalidField(format!(
                "expected {} samples, got r: {}, s: {}",
                grid.len(),
                r.len(),
                s.len()
            )));
        }
        if let Some(k) = r.iter().chain(&s).position(|v| !v.is_finite()) {
            return Err(Error::InvalidField(format!("non-finite sample at flat index {}", k % grid.len())));
        }
        Ok(Self { grid, t, r, s })
    }

    /// Samples `f(x) -> (r, s)` at every node.
    pub fn from_fn(grid: &Grid, t: f64, mut f: impl FnMut(&[f64]) -> (f64, f64)) -> Result<Self> {
        let mut r = Vec::with_capacity(grid.len());
        let mut s = Vec::with_capacity(grid.len());
        let mut x = [0.0; 2];
        for k in 0..grid.len() {
            grid.point(k, &mut x);
            let (rv, sv) = f(&x[..grid.dim()]);
            r.push(rv);
            s.push(sv);
        }
        Self::new(grid.clone(), t, r, s)
    }

    /// Samples a closed-form solution at time `t`.
    pub fn from_solution(grid: &Grid, t: f64, sol: &(impl Solution + ?Sized)) -> Result<Self> {
        Self::from_fn(grid, t, |x| sol.log_polar(x, t))
    }

    /// Converts complex samples, unwrapping the phase along `x` and then along `y` from the
    /// first column. Rejects zeros.
    pub fn from_complex(grid: &Grid, t: f64, values: &[Complex64]) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidField(format!("expected {} samples, got {}", grid.len(), values.len())));
        }
        if let Some(k) = values.iter().position(|z| !(z.norm() > 0.0) || !z.norm().is_finite()) {
            return Err(Error::InvalidField(format!("wavefunction vanishes at flat index {k}")));
        }
        let r: Vec<f64> = values.iter().map(|z| libm::log(z.norm())).collect();
        let raw: Vec<f64> = values.iter().map(|z| z.arg()).collect();
        let mut s = raw.clone();
        let (nx, ny) = (grid.points(0), grid.points(1));
        for j in 0..ny {
            let k0 = grid.index(0, j);
            if j > 0 {
                let below = grid.index(0, j - 1);
                s[k0] = s[below] + wrap_angle(raw[k0] - raw[below]);
            }
            for i in 1..nx {
                let (k, prev) = (grid.index(i, j), grid.index(i - 1, j));
                s[k] = s[prev] + wrap_angle(raw[k] - raw[prev]);
            }
        }
        Self::new(grid.clone(), t, r, s)
    }

    /// Grid of the samples.
    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    /// Time stamp.
    pub fn t(&self) -> f64 {
        self.t
    }
    /// Log-amplitude samples.
    pub fn r(&self) -> &[f64] {
        &self.r
    }
    /// Phase samples.
    pub fn s(&self) -> &[f64] {
        &self.s
    }
    /// Mutable access to both sample vectors.
    pub fn values_mut(&mut self) -> (&mut [f64], &mut [f64]) {
        (&mut self.r, &mut self.s)
    }
    /// Replaces the time stamp.
    pub fn with_time(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    /// `psi = exp(r + i s)` at every node.
    pub fn to_complex(&self) -> Vec<Complex64> {
        self.r.iter().zip(&self.s).map(|(&r, &s)| Complex64::from_polar(libm::exp(r), s)).collect()
    }

    /// Checks the field invariants: finite values and no neighbour phase jump above π
    /// (across a periodic seam the jump is taken modulo 2π).
    pub fn validate(&self) -> Result<()> {
        if self.r.iter().chain(&self.s).any(|v| !v.is_finite()) {
            return Err(Error::InvalidField("non-finite samples".into()));
        }
        let g = &self.grid;
        for k in 0..g.len() {
            let (i, j) = g.unflatten(k);
            let mut neighbours = [None, None];
            if i + 1 < g.points(0) {
                neighbours[0] = Some((g.index(i + 1, j), false));
            } else if g.boundary() == Boundary::Periodic {
                neighbours[0] = Some((g.index(0, j), true));
            }
            if g.dim() == 2 {
                if j + 1 < g.points(1) {
                    neighbours[1] = Some((g.index(i, j + 1), false));
                } else if g.boundary() == Boundary::Periodic {
                    neighbours[1] = Some((g.index(i, 0), true));
                }
            }
            for (nb, seam) in neighbours.into_iter().flatten() {
                let d = self.s[nb] - self.s[k];
                let d = if seam { wrap_angle(d) } else { d };
                if d.abs() > PI {
                    return Err(Error::InvalidField(format!("phase jump {d:.3} between nodes {k} and {nb}")));
                }
            }
        }
        Ok(())
    }

    /// Largest `|r|`.
    pub fn max_abs_r(&self) -> f64 {
        self.r.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Maximum pointwise differences `(max|Δr|, max|Δs|)` against another field on the same grid.
    pub fn max_difference(&self, other: &Self) -> Result<(f64, f64)> {
        if self.grid != other.grid {
            return Err(Error::Grid("fields live on different grids".into()));
        }
        let dr = self.r.iter().zip(&other.r).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        let ds = self.s.iter().zip(&other.s).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        Ok((dr, ds))
    }

    /// Applies `f(x, r, s) -> (r', s')` pointwise.
    pub fn map_pointwise(&self, mut f: impl FnMut(&[f64], f64, f64) -> Result<(f64, f64)>) -> Result<Self> {
        let g = &self.grid;
        let mut r = Vec::with_capacity(g.len());
        let mut s = Vec::with_capacity(g.len());
        let mut x = [0.0; 2];
        for k in 0..g.len() {
            g.point(k, &mut x);
            let (a, b) = f(&x[..g.dim()], self.r[k], self.s[k])?;
            r.push(a);
            s.push(b);
        }
        Self::new(g.clone(), self.t, r, s)
    }
}

/// Time-ordered sequence of fields on a common grid.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory {
    /// Slices in increasing time order.
    pub slices: Vec<LogPolarField>,
}

impl Trajectory {
    /// Wraps slices after checking grids agree and times increase.
    pub fn new(slices: Vec<LogPolarField>) -> Result<Self> {
        for w in slices.windows(2) {
            if w[0].grid() != w[1].grid() {
                return Err(Error::Grid("trajectory slices on different grids".into()));
            }
            if !(w[1].t() > w[0].t()) {
                return Err(Error::InvalidField("trajectory times must increase".into()));
            }
        }
        Ok(Self { slices })
    }

    /// Samples `sol` at `t0, t0 + dt, ..., t0 + (count-1) dt` with `dt` from the grid.
    pub fn sample(grid: &Grid, sol: &(impl Solution + ?Sized), t0: f64, count: usize) -> Result<Self> {
        let slices = (0..count)
            .map(|k| LogPolarField::from_solution(grid, t0 + k as f64 * grid.dt(), sol))
            .collect::<Result<Vec<_>>>()?;
        Self::new(slices)
    }

    /// Number of slices.
    pub fn len(&self) -> usize {
        self.slices.len()
    }
    /// Whether there are no slices.
    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }
    /// Last slice.
    pub fn last(&self) -> Option<&LogPolarField> {
        self.slices.last()
    }
    /// Applies a slice-wise map.
    pub fn map(&self, f: impl FnMut(&LogPolarField) -> Result<LogPolarField>) -> Result<Self> {
        Self::new(self.slices.iter().map(f).collect::<Result<Vec<_>>>()?)
    }
}
