//! Four-point (cubic) Lagrange interpolation of log-polar fields.

use alloc::format;

use super::field::{wrap_angle, LogPolarField};
use super::grid::{Boundary, Grid};
use crate::error::{Error, Result};

/// Relative slack allowed when a query point sits marginally outside a Dirichlet grid.
const EDGE_SLACK: f64 = 1e-9;

fn weights(theta: f64) -> [f64; 4] {
    let (a, b, c) = (theta - 1.0, theta - 2.0, theta - 3.0);
    [-a * b * c / 6.0, theta * b * c / 2.0, -theta * a * c / 2.0, theta * a * b / 6.0]
}

/// Stencil start index (may be negative or past the end for periodic grids) and the local
/// coordinate of the query inside the stencil.
fn stencil(grid: &Grid, axis: usize, x: f64) -> Result<(i64, f64)> {
    let h = grid.spacing(axis);
    let u = (x - grid.lo(axis)) / h;
    let n = grid.points(axis) as i64;
    let mut i0 = libm::floor(u) as i64 - 1;
    if grid.boundary() == Boundary::Dirichlet {
        let last = (n - 1) as f64;
        if u < -EDGE_SLACK * last.max(1.0) || u > last * (1.0 + EDGE_SLACK) {
            return Err(Error::OutOfSupport(format!(
                "coordinate {x} outside [{}, {}] on axis {axis}",
                grid.lo(axis),
                grid.hi(axis)
            )));
        }
        i0 = i0.clamp(0, n - 4);
    }
    Ok((i0, u - i0 as f64))
}

fn wrap_index(i: i64, n: usize) -> usize {
    i.rem_euclid(n as i64) as usize
}

/// Interpolated `(r, s)` at `x`. Periodic grids wrap; Dirichlet grids reject points outside.
pub fn sample(field: &LogPolarField, x: &[f64]) -> Result<(f64, f64)> {
    let g = field.grid();
    let (r, s) = (field.r(), field.s());
    let (i0, tx) = stencil(g, 0, x[0])?;
    let wx = weights(tx);
    let (j0, wy) = if g.dim() == 2 {
        let (j0, ty) = stencil(g, 1, x[1])?;
        (j0, weights(ty))
    } else {
        (0, [1.0, 0.0, 0.0, 0.0])
    };
    let rows = if g.dim() == 2 { 4 } else { 1 };
    let periodic = g.boundary() == Boundary::Periodic;
    // Steps inside the stencil use raw phase differences, except a step across the periodic
    // seam, which is wrapped so the winding of the phase does not enter.
    let crossed = |idx: i64, n: usize| periodic && idx.rem_euclid(n as i64) == 0;
    let (mut rv, mut sv) = (0.0, 0.0);
    let mut row_start: Option<(usize, f64)> = None;
    for (b, wyb) in wy.iter().enumerate().take(rows) {
        let jj = j0 + b as i64;
        let j = wrap_index(jj, g.points(1));
        let (mut r_row, mut s_row) = (0.0, 0.0);
        let mut prev: Option<(usize, f64)> = None;
        for (a, wxa) in wx.iter().enumerate() {
            let ii = i0 + a as i64;
            let i = wrap_index(ii, g.points(0));
            let k = g.index(i, j);
            let step = |from: (usize, f64), cross: bool| {
                let d = s[k] - s[from.0];
                from.1 + if cross { wrap_angle(d) } else { d }
            };
            let sk = match (prev, row_start) {
                (Some(p), _) => step(p, crossed(ii, g.points(0))),
                (None, Some(start)) => step(start, b > 0 && crossed(jj, g.points(1))),
                (None, None) => s[k],
            };
            if a == 0 {
                row_start = Some((k, sk));
            }
            prev = Some((k, sk));
            r_row += wxa * r[k];
            s_row += wxa * sk;
        }
        rv += wyb * r_row;
        sv += wyb * s_row;
    }
    Ok((rv, sv))
}

/// Re-establishes phase continuity by chaining wrapped neighbour differences from node 0.
pub fn unwrap_phase(field: &mut LogPolarField) {
    let g = field.grid().clone();
    let (_, s) = field.values_mut();
    let raw = s.to_vec();
    for j in 0..g.points(1) {
        let k0 = g.index(0, j);
        if j > 0 {
            let below = g.index(0, j - 1);
            s[k0] = s[below] + wrap_angle(raw[k0] - raw[below]);
        }
        for i in 1..g.points(0) {
            let (k, prev) = (g.index(i, j), g.index(i - 1, j));
            s[k] = s[prev] + wrap_angle(raw[k] - raw[prev]);
        }
    }
}
