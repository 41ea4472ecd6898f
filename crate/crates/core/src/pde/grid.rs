use alloc::format;

use crate::error::{Error, Result};

/// Boundary treatment of a [`Grid`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    /// Periodic in every axis; `hi` is identified with `lo`.
    Periodic,
    /// Boundary nodes are pinned to externally supplied values.
    Dirichlet,
}

/// Uniform tensor grid in one or two space dimensions plus a time step.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    dim: usize,
    lo: [f64; 2],
    hi: [f64; 2],
    points: [usize; 2],
    boundary: Boundary,
    dt: f64,
}

/// Smallest admissible number of points per axis.
pub const MIN_POINTS: usize = 16;

impl Grid {
    /// General constructor; `lo`, `hi`, `points` must have `dim` entries (1 or 2).
    pub fn new(lo: &[f64], hi: &[f64], points: &[usize], boundary: Boundary, dt: f64) -> Result<Self> {
        let dim = points.len();
        if !(1..=2).contains(&dim) || lo.len() != dim || hi.len() != dim {
            return Err(Error::Grid(format!("dimension must be 1 or 2, got {dim}")));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Grid(format!("dt must be positive, got {dt}")));
        }
        let mut g = Grid { dim, lo: [0.0; 2], hi: [0.0; 2], points: [1; 2], boundary, dt };
        for a in 0..dim {
            if points[a] < MIN_POINTS {
                return Err(Error::Grid(format!("need at least {MIN_POINTS} points per axis, got {}", points[a])));
            }
            if !(hi[a] > lo[a]) || !lo[a].is_finite() || !hi[a].is_finite() {
                return Err(Error::Grid(format!("empty extent [{}, {}]", lo[a], hi[a])));
            }
            g.lo[a] = lo[a];
            g.hi[a] = hi[a];
            g.points[a] = points[a];
        }
        Ok(g)
    }

    /// One-dimensional grid on `[lo, hi]`.
    pub fn line(lo: f64, hi: f64, points: usize, boundary: Boundary, dt: f64) -> Result<Self> {
        Self::new(&[lo], &[hi], &[points], boundary, dt)
    }

    /// Square `[lo, hi]²` grid with `points` per axis.
    pub fn square(lo: f64, hi: f64, points: usize, boundary: Boundary, dt: f64) -> Result<Self> {
        Self::new(&[lo, lo], &[hi, hi], &[points, points], boundary, dt)
    }

    /// Grid centred at the origin with `points` nodes of spacing `dx` per axis.
    pub fn centered(dim: usize, points: usize, dx: f64, boundary: Boundary, dt: f64) -> Result<Self> {
        if !(dx > 0.0) {
            return Err(Error::Grid(format!("dx must be positive, got {dx}")));
        }
        let cells = match boundary {
            Boundary::Periodic => points as f64,
            Boundary::Dirichlet => points.saturating_sub(1) as f64,
        };
        let half = 0.5 * cells * dx;
        let lo = [-half; 2];
        let hi = [half; 2];
        let pts = [points; 2];
        Self::new(&lo[..dim.min(2)], &hi[..dim.min(2)], &pts[..dim.min(2)], boundary, dt)
    }

    /// Spatial dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }
    /// Boundary kind.
    pub fn boundary(&self) -> Boundary {
        self.boundary
    }
    /// Time step.
    pub fn dt(&self) -> f64 {
        self.dt
    }
    /// Lower corner along `axis`.
    pub fn lo(&self, axis: usize) -> f64 {
        self.lo[axis]
    }
    /// Upper corner along `axis`.
    pub fn hi(&self, axis: usize) -> f64 {
        self.hi[axis]
    }
    /// Nodes along `axis` (1 for unused axes).
    pub fn points(&self, axis: usize) -> usize {
        self.points[axis]
    }
    /// Total node count.
    pub fn len(&self) -> usize {
        self.points[0] * self.points[1]
    }
    /// Always false; grids have at least 16 nodes.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Node spacing along `axis`.
    pub fn spacing(&self, axis: usize) -> f64 {
        let width = self.hi[axis] - self.lo[axis];
        match self.boundary {
            Boundary::Periodic => width / self.points[axis] as f64,
            Boundary::Dirichlet => width / (self.points[axis] - 1) as f64,
        }
    }

    /// Smallest spacing over the active axes.
    pub fn min_spacing(&self) -> f64 {
        (0..self.dim).map(|a| self.spacing(a)).fold(f64::INFINITY, f64::min)
    }

    /// Cell volume `Π dx_a`.
    pub fn cell_volume(&self) -> f64 {
        (0..self.dim).map(|a| self.spacing(a)).product()
    }

    /// Period along `axis` (periodic grids).
    pub fn period(&self, axis: usize) -> f64 {
        self.hi[axis] - self.lo[axis]
    }

    /// Coordinate of node `i` along `axis`.
    pub fn coordinate(&self, axis: usize, i: usize) -> f64 {
        self.lo[axis] + i as f64 * self.spacing(axis)
    }

    /// Flat index of `(i, j)`; `x` varies fastest.
    pub fn index(&self, i: usize, j: usize) -> usize {
        i + self.points[0] * j
    }

    /// `(i, j)` of a flat index.
    pub fn unflatten(&self, k: usize) -> (usize, usize) {
        (k % self.points[0], k / self.points[0])
    }

    /// Coordinates of flat node `k` written into `x[..dim]`.
    pub fn point(&self, k: usize, x: &mut [f64]) {
        let (i, j) = self.unflatten(k);
        x[0] = self.coordinate(0, i);
        if self.dim == 2 {
            x[1] = self.coordinate(1, j);
        }
    }

    /// Whether node `k` lies on a Dirichlet boundary.
    pub fn is_boundary(&self, k: usize) -> bool {
        if self.boundary == Boundary::Periodic {
            return false;
        }
        let (i, j) = self.unflatten(k);
        let edge = |idx: usize, a: usize| idx == 0 || idx + 1 == self.points[a];
        edge(i, 0) || (self.dim == 2 && edge(j, 1))
    }

    /// Same grid with a different time step.
    pub fn with_dt(&self, dt: f64) -> Result<Self> {
        Self::new(&self.lo[..self.dim], &self.hi[..self.dim], &self.points[..self.dim], self.boundary, dt)
    }

    /// Same extent with `points` nodes per axis.
    pub fn with_points(&self, points: usize) -> Result<Self> {
        let pts = [points; 2];
        Self::new(&self.lo[..self.dim], &self.hi[..self.dim], &pts[..self.dim], self.boundary, self.dt)
    }

    /// Dirichlet grid with the same spacing covering `[lo, hi]` (per axis), aligned to this
    /// grid's nodes and widened by `margin` extra nodes on each side.
    pub fn aligned_cover(&self, lo: &[f64], hi: &[f64], margin: usize) -> Result<Self> {
        let mut new_lo = [0.0; 2];
        let mut new_hi = [0.0; 2];
        let mut pts = [0usize; 2];
        for a in 0..self.dim {
            let h = self.spacing(a);
            let lo_idx = libm::floor((lo[a] - self.lo[a]) / h + 1e-9) as i64 - margin as i64;
            let hi_idx = libm::ceil((hi[a] - self.lo[a]) / h - 1e-9) as i64 + margin as i64;
            let lo_idx = lo_idx.min(0);
            let last = self.points[a] as i64 - 1;
            let hi_idx = hi_idx.max(last);
            new_lo[a] = self.lo[a] + lo_idx as f64 * h;
            new_hi[a] = self.lo[a] + hi_idx as f64 * h;
            pts[a] = (hi_idx - lo_idx + 1) as usize;
        }
        if self.boundary == Boundary::Periodic {
            return Err(Error::Grid("periodic grids need no cover".into()));
        }
        Self::new(&new_lo[..self.dim], &new_hi[..self.dim], &pts[..self.dim], Boundary::Dirichlet, self.dt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_depends_on_boundary() {
        let p = Grid::line(0.0, 1.0, 16, Boundary::Periodic, 0.1).unwrap();
        let d = Grid::line(0.0, 1.0, 17, Boundary::Dirichlet, 0.1).unwrap();
        assert!((p.spacing(0) - 1.0 / 16.0).abs() < 1e-15);
        assert!((d.spacing(0) - 1.0 / 16.0).abs() < 1e-15);
        assert!(d.is_boundary(0) && d.is_boundary(16) && !d.is_boundary(3));
        assert!(!p.is_boundary(0));
    }

    #[test]
    fn rejects_small_or_degenerate_grids() {
        assert!(Grid::line(0.0, 1.0, 15, Boundary::Periodic, 0.1).is_err());
        assert!(Grid::line(1.0, 1.0, 32, Boundary::Periodic, 0.1).is_err());
        assert!(Grid::line(0.0, 1.0, 32, Boundary::Periodic, 0.0).is_err());
        assert!(Grid::new(&[0.0; 3], &[1.0; 3], &[16; 3], Boundary::Periodic, 0.1).is_err());
    }

    #[test]
    fn centered_and_cover() {
        let g = Grid::centered(2, 33, 0.25, Boundary::Dirichlet, 0.01).unwrap();
        assert_eq!((g.lo(0), g.hi(1)), (-4.0, 4.0));
        assert_eq!(g.len(), 33 * 33);
        let c = g.aligned_cover(&[-5.1, -4.0], &[4.0, 4.3], 2).unwrap();
        assert!((c.lo(0) - (-5.75)).abs() < 1e-12);
        assert!((c.hi(1) - 5.0).abs() < 1e-12);
        assert!((c.spacing(0) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn indexing_round_trips() {
        let g = Grid::square(-1.0, 1.0, 20, Boundary::Periodic, 0.1).unwrap();
        let mut x = [0.0; 2];
        for k in [0, 19, 20, 399] {
            let (i, j) = g.unflatten(k);
            assert_eq!(g.index(i, j), k);
            g.point(k, &mut x);
            assert!((x[0] - g.coordinate(0, i)).abs() < 1e-15);
        }
    }
}
