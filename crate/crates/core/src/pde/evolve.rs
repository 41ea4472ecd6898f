//! Classical RK4 method of lines.

use alloc::format;
use alloc::vec;

use super::field::{LogPolarField, Trajectory};
use super::grid::Boundary;
use super::rhs_into;
use super::solutions::Solution;
use crate::error::{Error, Result};
use crate::params::DgParams;

/// Stepper configuration.
#[derive(Clone, Copy)]
pub struct EvolveOptions<'a> {
    /// Stability constant: `dt ≤ c_cfl · dx²` is enforced.
    pub c_cfl: f64,
    /// Abort once `max |r|` exceeds this bound.
    pub blowup: f64,
    /// Source of boundary values on Dirichlet grids.
    pub boundary: Option<&'a dyn Solution>,
    /// Keep every `record_every`-th step (the final step is always kept).
    pub record_every: usize,
}

impl Default for EvolveOptions<'_> {
    fn default() -> Self {
        Self { c_cfl: 0.2, blowup: 300.0, boundary: None, record_every: 1 }
    }
}

impl core::fmt::Debug for EvolveOptions<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("EvolveOptions")
            .field("c_cfl", &self.c_cfl)
            .field("blowup", &self.blowup)
            .field("boundary", &self.boundary.is_some())
            .field("record_every", &self.record_every)
            .finish()
    }
}

fn pin(field: &LogPolarField, sol: Option<&dyn Solution>, t: f64, r: &mut [f64], s: &mut [f64]) {
    let g = field.grid();
    if g.boundary() != Boundary::Dirichlet {
        return;
    }
    let mut x = [0.0; 2];
    for k in 0..g.len() {
        if g.is_boundary(k) {
            match sol {
                Some(sol) => {
                    g.point(k, &mut x);
                    let (a, b) = sol.log_polar(&x[..g.dim()], t);
                    r[k] = a;
                    s[k] = b;
                }
                None => {
                    r[k] = field.r()[k];
                    s[k] = field.s()[k];
                }
            }
        }
    }
}

/// Advances `field0` by `steps` steps of size `grid.dt()`.
///
/// On Dirichlet grids every RK stage is pinned to `options.boundary` at the stage time, or
/// frozen at the initial boundary values when no source is given.
pub fn evolve(p: &DgParams, field0: &LogPolarField, steps: usize, options: &EvolveOptions<'_>) -> Result<Trajectory> {
    field0.validate()?;
    let g = field0.grid().clone();
    if g.dim() != p.n() {
        return Err(Error::Grid("field dimension differs from the parameter dimension".into()));
    }
    let dx = g.min_spacing();
    let dt = g.dt();
    if dt > options.c_cfl * dx * dx * (1.0 + 1e-12) {
        return Err(Error::Grid(format!("dt = {dt} exceeds c_cfl * dx^2 = {}", options.c_cfl * dx * dx)));
    }
    let every = options.record_every.max(1);
    let c = p.coeffs();
    let len = g.len();
    let mut slices = vec![field0.clone()];
    let (mut r, mut s) = (field0.r().to_vec(), field0.s().to_vec());
    let mut k = [(); 4].map(|_| (vec![0.0; len], vec![0.0; len]));
    let (mut ur, mut us) = (vec![0.0; len], vec![0.0; len]);
    let t0 = field0.t();
    for step in 0..steps {
        let t = t0 + step as f64 * dt;
        rhs_into(&c, &g, &r, &s, &mut k[0].0, &mut k[0].1);
        for (stage, h) in [(1, 0.5), (2, 0.5), (3, 1.0)] {
            let (prev, rest) = k.split_at_mut(stage);
            let (pr, ps) = &prev[stage - 1];
            for i in 0..len {
                ur[i] = r[i] + h * dt * pr[i];
                us[i] = s[i] + h * dt * ps[i];
            }
            pin(field0, options.boundary, t + h * dt, &mut ur, &mut us);
            let (kr, ks) = &mut rest[0];
            rhs_into(&c, &g, &ur, &us, kr, ks);
        }
        for i in 0..len {
            r[i] += dt / 6.0 * (k[0].0[i] + 2.0 * k[1].0[i] + 2.0 * k[2].0[i] + k[3].0[i]);
            s[i] += dt / 6.0 * (k[0].1[i] + 2.0 * k[1].1[i] + 2.0 * k[2].1[i] + k[3].1[i]);
        }
        let t_next = t0 + (step + 1) as f64 * dt;
        pin(field0, options.boundary, t_next, &mut r, &mut s);
        let worst = r.iter().chain(&s).fold(0.0f64, |m, v| if v.is_finite() { m.max(v.abs()) } else { f64::INFINITY });
        let rmax = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !worst.is_finite() || rmax > options.blowup {
            return Err(Error::BlowUp { step: step + 1, value: if worst.is_finite() { rmax } else { worst } });
        }
        if (step + 1) % every == 0 || step + 1 == steps {
            slices.push(LogPolarField::new(g.clone(), t_next, r.clone(), s.clone())?);
        }
    }
    Trajectory::new(slices)
}
