//! Second-order centred differences. The phase is taken as unwrapped, so differences are used
//! as they are; only a difference across a periodic seam is wrapped into `(-π, π]`, which
//! absorbs the winding of the phase around the period.

use super::field::wrap_angle;
use super::grid::{Boundary, Grid};

/// First and second derivatives of `(r, s)` at one node.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct Jet {
    pub gr: [f64; 2],
    pub gs: [f64; 2],
    pub lap_r: f64,
    pub lap_s: f64,
}

impl Jet {
    pub fn grad_r_sq(&self) -> f64 {
        self.gr[0] * self.gr[0] + self.gr[1] * self.gr[1]
    }
    pub fn grad_s_sq(&self) -> f64 {
        self.gs[0] * self.gs[0] + self.gs[1] * self.gs[1]
    }
    pub fn grad_r_dot_s(&self) -> f64 {
        self.gr[0] * self.gs[0] + self.gr[1] * self.gs[1]
    }
}

/// Neighbours `(minus, plus)` of node `(i, j)` along `axis`, or `None` at a Dirichlet edge.
pub(crate) fn neighbours(grid: &Grid, i: usize, j: usize, axis: usize) -> Option<(usize, usize)> {
    let n = grid.points(axis);
    let c = if axis == 0 { i } else { j };
    let (m, p) = if c == 0 || c + 1 == n {
        if grid.boundary() == Boundary::Dirichlet {
            return None;
        }
        ((c + n - 1) % n, (c + 1) % n)
    } else {
        (c - 1, c + 1)
    };
    Some(if axis == 0 { (grid.index(m, j), grid.index(p, j)) } else { (grid.index(i, m), grid.index(i, p)) })
}

/// Derivatives at flat node `k`; `None` on Dirichlet boundary nodes.
pub(crate) fn jet(grid: &Grid, r: &[f64], s: &[f64], k: usize) -> Option<Jet> {
    let (i, j) = grid.unflatten(k);
    let mut out = Jet::default();
    for axis in 0..grid.dim() {
        let (m, p) = neighbours(grid, i, j, axis)?;
        let h = grid.spacing(axis);
        let c = if axis == 0 { i } else { j };
        let periodic = grid.boundary() == Boundary::Periodic;
        let seam = |d: f64, crossed: bool| if crossed { wrap_angle(d) } else { d };
        out.gr[axis] = (r[p] - r[m]) / (2.0 * h);
        out.lap_r += (r[p] - 2.0 * r[k] + r[m]) / (h * h);
        let dp = seam(s[p] - s[k], periodic && c + 1 == grid.points(axis));
        let dm = seam(s[k] - s[m], periodic && c == 0);
        out.gs[axis] = (dp + dm) / (2.0 * h);
        out.lap_s += (dp - dm) / (h * h);
    }
    Some(out)
}
