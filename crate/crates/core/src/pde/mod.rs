//! Log-polar discretisation of the Doebner–Goldin system: grids, fields, the homogeneous
//! functionals, the evolution right-hand side, residuals, an RK4 stepper and closed-form
//! reference solutions.
//!
//! A wavefunction `ψ = e^{r + is}` is stored through `(r, s)`. The system reads
//! `r_t = ν₁R₁ + ν₂R₂`, `s_t = −Σ μ_k R_k` with
//! `R₁ = Δs + 2∇r·∇s`, `R₂ = 2Δr + 4|∇r|²`, `R₃ = |∇s|²`, `R₄ = 2∇r·∇s`, `R₅ = 4|∇r|²`.

mod evolve;
mod field;
mod grid;
pub mod interp;
mod solutions;
mod stencil;

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

pub use evolve::{evolve, EvolveOptions};
pub use field::{wrap_angle, LogPolarField, Trajectory};
pub use grid::{Boundary, Grid, MIN_POINTS};
pub use solutions::{
    heat_solution, ln_cosh, se_gaussian, Gauged, HeatDirection, HeatMoments, HeatSolution, LogCoshProfile, SeMoments,
    SePacket, SeSolution, SelfSimilar, Solution,
};

use crate::error::{Error, Result};
use crate::params::{DgCoeffs, DgParams};
use stencil::{jet, Jet};

/// The five functionals `R₁…R₅` on a grid; Dirichlet boundary nodes hold NaN.
#[derive(Clone, Debug, PartialEq)]
pub struct Functionals {
    /// `values[k]` is `R_{k+1}`.
    pub values: [Vec<f64>; 5],
}

impl Functionals {
    /// `R_j` for `j` in `1..=5`.
    pub fn get(&self, j: usize) -> &[f64] {
        &self.values[j - 1]
    }
}

fn r_values(j: &Jet) -> [f64; 5] {
    let rs = j.grad_r_dot_s();
    let rr = j.grad_r_sq();
    [j.lap_s + 2.0 * rs, 2.0 * j.lap_r + 4.0 * rr, j.grad_s_sq(), 2.0 * rs, 4.0 * rr]
}

/// Evaluates `R₁…R₅` with centred second-order differences.
pub fn functionals(field: &LogPolarField) -> Result<Functionals> {
    field.validate()?;
    let g = field.grid();
    let mut values: [Vec<f64>; 5] = Default::default();
    for v in values.iter_mut() {
        *v = vec![f64::NAN; g.len()];
    }
    for k in 0..g.len() {
        if let Some(j) = jet(g, field.r(), field.s(), k) {
            for (v, x) in values.iter_mut().zip(r_values(&j)) {
                v[k] = x;
            }
        }
    }
    Ok(Functionals { values })
}

fn rhs_at(c: &DgCoeffs, j: &Jet) -> (f64, f64) {
    let r = r_values(j);
    let rt = c.nu1 * r[0] + c.nu2 * r[1];
    let st = -(c.mu[1] * r[0] + c.mu[2] * r[1] + c.mu[3] * r[2] + c.mu[4] * r[3] + c.mu[5] * r[4]);
    (rt, st)
}

pub(crate) fn rhs_into(c: &DgCoeffs, g: &Grid, r: &[f64], s: &[f64], rt: &mut [f64], st: &mut [f64]) {
    for k in 0..g.len() {
        let (a, b) = jet(g, r, s, k).map(|j| rhs_at(c, &j)).unwrap_or((0.0, 0.0));
        rt[k] = a;
        st[k] = b;
    }
}

/// Time derivatives `(r_t, s_t)`; zero on Dirichlet boundary nodes.
pub fn dg_rhs(p: &DgParams, field: &LogPolarField) -> Result<(Vec<f64>, Vec<f64>)> {
    field.validate()?;
    let g = field.grid();
    let (mut rt, mut st) = (vec![0.0; g.len()], vec![0.0; g.len()]);
    rhs_into(&p.coeffs(), g, field.r(), field.s(), &mut rt, &mut st);
    Ok((rt, st))
}

/// Maximum and root-mean-square style norms of a residual.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Norms {
    /// Largest absolute value.
    pub linf: f64,
    /// Space-time `L²` norm `(Σ F² dV dt)^{1/2}` over the interior.
    pub l2: f64,
}

impl Norms {
    /// Larger of the two norms of `self` and `other`, componentwise.
    pub fn max(self, other: Norms) -> Norms {
        Norms { linf: self.linf.max(other.linf), l2: self.l2.max(other.l2) }
    }
}

/// Residual norms of the two real evolution equations.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ResidualNorms {
    /// `−r_t + ν₁R₁ + ν₂R₂`.
    pub f1: Norms,
    /// `s_t + Σ μ_k R_k`.
    pub f2: Norms,
}

impl ResidualNorms {
    /// Largest `L∞` norm of the two equations.
    pub fn linf(&self) -> f64 {
        self.f1.linf.max(self.f2.linf)
    }
    /// Largest `L²` norm of the two equations.
    pub fn l2(&self) -> f64 {
        self.f1.l2.max(self.f2.l2)
    }
}

#[derive(Default)]
struct Acc {
    linf: f64,
    sq: f64,
}

impl Acc {
    fn push(&mut self, v: f64, w: f64) {
        let a = v.abs();
        // NaN propagates into the maximum so broken data cannot look clean.
        if a > self.linf || a.is_nan() {
            self.linf = a;
        }
        self.sq += v * v * w;
    }
    fn norms(&self) -> Norms {
        Norms { linf: self.linf, l2: libm::sqrt(self.sq) }
    }
}

/// Three-point derivative at the middle of non-uniform times from the two forward differences.
fn time_derivative(h1: f64, h2: f64, d1: f64, d2: f64) -> f64 {
    (h1 * h1 * d2 + h2 * h2 * d1) / (h1 * h2 * (h1 + h2))
}

fn check_slices(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::TooFewSlices { need: 3, got: n });
    }
    Ok(())
}

/// Substitutes centred differences into both evolution equations at every interior slice and
/// interior node.
pub fn residual(p: &DgParams, traj: &Trajectory) -> Result<ResidualNorms> {
    check_slices(traj.len())?;
    let c = p.coeffs();
    let g = traj.slices[0].grid();
    if g.dim() != p.n() {
        return Err(Error::Grid("trajectory dimension differs from the parameter dimension".into()));
    }
    let (mut a1, mut a2) = (Acc::default(), Acc::default());
    for w in traj.slices.windows(3) {
        let (f0, f1, f2) = (&w[0], &w[1], &w[2]);
        let (h1, h2) = (f1.t() - f0.t(), f2.t() - f1.t());
        let weight = g.cell_volume() * 0.5 * (h1 + h2);
        for k in 0..g.len() {
            let Some(j) = jet(g, f1.r(), f1.s(), k) else { continue };
            let (rt, st) = rhs_at(&c, &j);
            let r_dot = time_derivative(h1, h2, f1.r()[k] - f0.r()[k], f2.r()[k] - f1.r()[k]);
            let s_dot = time_derivative(h1, h2, f1.s()[k] - f0.s()[k], f2.s()[k] - f1.s()[k]);
            a1.push(rt - r_dot, weight);
            a2.push(s_dot - st, weight);
        }
    }
    Ok(ResidualNorms { f1: a1.norms(), f2: a2.norms() })
}

fn complex_laplacian(g: &Grid, v: &[Complex64], k: usize) -> Option<Complex64> {
    let (i, j) = g.unflatten(k);
    let mut lap = Complex64::new(0.0, 0.0);
    for axis in 0..g.dim() {
        let (m, p) = stencil::neighbours(g, i, j, axis)?;
        let h = g.spacing(axis);
        lap += (v[p] - v[k] * 2.0 + v[m]) / (h * h);
    }
    Some(lap)
}

/// Residual of `iΨ_t = aΔΨ` for `Ψ = e^{r+is}`, on the interior of a trajectory.
pub fn se_residual(a: f64, traj: &Trajectory) -> Result<Norms> {
    check_slices(traj.len())?;
    let g = traj.slices[0].grid();
    let psi: Vec<Vec<Complex64>> = traj.slices.iter().map(|f| f.to_complex()).collect();
    let mut acc = Acc::default();
    for (w, f) in psi.windows(3).zip(traj.slices.windows(3)) {
        let (h1, h2) = (f[1].t() - f[0].t(), f[2].t() - f[1].t());
        let weight = g.cell_volume() * 0.5 * (h1 + h2);
        for k in 0..g.len() {
            let Some(lap) = complex_laplacian(g, &w[1], k) else { continue };
            let d1 = w[1][k] - w[0][k];
            let d2 = w[2][k] - w[1][k];
            let dt = (d2 * (h1 * h1) + d1 * (h2 * h2)) / (h1 * h2 * (h1 + h2));
            acc.push((Complex64::new(0.0, 1.0) * dt - lap * a).norm(), weight);
        }
    }
    Ok(acc.norms())
}

/// Residual of the heat equation satisfied by `sol`, sampled at `t0, t0 + dt, …` on `grid`.
pub fn heat_residual(sol: &HeatSolution, grid: &Grid, t0: f64, count: usize) -> Result<Norms> {
    check_slices(count)?;
    let mut x = [0.0; 2];
    let slices: Vec<Vec<Complex64>> = (0..count)
        .map(|n| {
            let t = t0 + n as f64 * grid.dt();
            (0..grid.len())
                .map(|k| {
                    grid.point(k, &mut x);
                    sol.checked_value(&x[..grid.dim()], t).map(|v| Complex64::new(v, 0.0))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let coeff = sol.direction().sigma() * sol.diffusion();
    let h = grid.dt();
    let weight = grid.cell_volume() * h;
    let mut acc = Acc::default();
    for w in slices.windows(3) {
        for k in 0..grid.len() {
            let Some(lap) = complex_laplacian(grid, &w[1], k) else { continue };
            let dt = (w[2][k].re - w[0][k].re) / (2.0 * h);
            acc.push(dt - coeff * lap.re, weight);
        }
    }
    Ok(acc.norms())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{int, rat};

    fn se_params(a: i64) -> DgParams {
        DgParams::builder(1, int(a)).mu(2, rat(a, 2)).mu(3, int(-a)).mu(5, rat(-a, 4)).build().unwrap()
    }

    #[test]
    fn constant_field_has_zero_functionals_and_rhs() {
        let g = Grid::line(-1.0, 1.0, 32, Boundary::Periodic, 1e-3).unwrap();
        let f = LogPolarField::from_fn(&g, 0.0, |_| (0.3, -1.2)).unwrap();
        let r = functionals(&f).unwrap();
        assert!(r.values.iter().all(|v| v.iter().all(|x| *x == 0.0)));
        let (rt, st) = dg_rhs(&se_params(1), &f).unwrap();
        assert!(rt.iter().chain(&st).all(|x| *x == 0.0));
    }

    #[test]
    fn plane_wave_functionals() {
        let k = 2.0 * core::f64::consts::PI / 4.0 * 3.0;
        let g = Grid::line(0.0, 4.0, 64, Boundary::Periodic, 1e-3).unwrap();
        let f = LogPolarField::from_fn(&g, 0.0, |x| (0.0, k * x[0])).unwrap();
        let r = functionals(&f).unwrap();
        // Centred differences are exact on linear data, including across the wrapped seam.
        for i in 0..g.len() {
            assert!((r.get(3)[i] - k * k).abs() < 1e-9);
            assert!(r.get(1)[i].abs() < 1e-9);
            assert!(r.get(2)[i].abs() < 1e-12 && r.get(5)[i].abs() < 1e-12);
        }
    }

    #[test]
    fn gaussian_functionals_exact_on_quadratics() {
        for n in [64, 128] {
            let g = Grid::line(-2.0, 2.0, n, Boundary::Dirichlet, 1e-3).unwrap();
            let f = LogPolarField::from_fn(&g, 0.0, |x| (-x[0] * x[0], 0.0)).unwrap();
            let r = functionals(&f).unwrap();
            let mut x = [0.0; 2];
            let mut e: f64 = 0.0;
            for k in 1..n - 1 {
                g.point(k, &mut x);
                e = e.max((r.get(5)[k] - 16.0 * x[0] * x[0]).abs());
                e = e.max((r.get(2)[k] - (-4.0 + 16.0 * x[0] * x[0])).abs());
                assert_eq!(r.get(1)[k], 0.0);
            }
            assert!(r.get(1)[0].is_nan());
            // Centred first and second differences reproduce quadratics exactly.
            assert!(e < 1e-9, "{e}");
        }
    }

    #[test]
    fn laplacian_decomposition_identity() {
        let g = Grid::square(-1.0, 1.0, 40, Boundary::Dirichlet, 1e-3).unwrap();
        let f =
            LogPolarField::from_fn(&g, 0.0, |x| (-0.3 * x[0] * x[0] + 0.2 * x[1], 0.5 * x[0] * x[1] + x[1])).unwrap();
        let r = functionals(&f).unwrap();
        let psi = f.to_complex();
        for k in 0..g.len() {
            if let Some(lap) = complex_laplacian(&g, &psi, k) {
                let lhs = Complex64::new(r.get(2)[k] / 2.0 - r.get(3)[k] - r.get(5)[k] / 4.0, r.get(1)[k]);
                assert!((lhs - lap / psi[k]).norm() < 0.05, "{k}");
            }
        }
    }

    #[test]
    fn plane_wave_rhs_matches_dispersion() {
        // mu3 = -2 nu1 with nu1 = 1.
        let p = DgParams::builder(1, int(1)).mu(3, int(-2)).build().unwrap();
        let k = 2.0 * core::f64::consts::PI;
        let g = Grid::line(0.0, 1.0, 256, Boundary::Periodic, 1e-3).unwrap();
        let f = LogPolarField::from_fn(&g, 0.0, |x| (0.0, k * x[0])).unwrap();
        let (rt, st) = dg_rhs(&p, &f).unwrap();
        for i in 0..g.len() {
            assert!(rt[i].abs() < 1e-9);
            assert!((st[i] - 2.0 * k * k).abs() < 1e-8);
        }
    }

    fn se_solution() -> SeSolution {
        se_gaussian(
            -1.0,
            SeMoments {
                background: Complex64::new(1.0, 0.0),
                background_wavevector: vec![0.5],
                packet: Some(SePacket {
                    amplitude: Complex64::new(0.6, 0.0),
                    center: vec![0.0],
                    width: 1.0,
                    wavevector: vec![1.0],
                }),
            },
        )
        .unwrap()
    }

    #[test]
    fn rhs_matches_se_time_derivative() {
        let sol = se_solution();
        let p = se_params(-1);
        let mut errs = vec![];
        for n in [64, 128] {
            let g = Grid::line(-4.0, 4.0, n, Boundary::Dirichlet, 1e-3).unwrap();
            let f = LogPolarField::from_solution(&g, 0.1, &sol).unwrap();
            let (rt, st) = dg_rhs(&p, &f).unwrap();
            let mut x = [0.0; 2];
            let mut e: f64 = 0.0;
            for k in 1..n - 1 {
                g.point(k, &mut x);
                let h = 1e-5;
                let (rp, sp) = sol.log_polar(&x[..1], 0.1 + h);
                let (rm, sm) = sol.log_polar(&x[..1], 0.1 - h);
                e = e.max((rt[k] - (rp - rm) / (2.0 * h)).abs());
                e = e.max((st[k] - (sp - sm) / (2.0 * h)).abs());
            }
            errs.push(e);
        }
        let ratio = errs[0] / errs[1];
        assert!((3.0..5.0).contains(&ratio), "{errs:?}");
    }

    #[test]
    fn residual_of_exact_solution_converges() {
        let sol = se_solution();
        let p = se_params(-1);
        let mut l2 = vec![];
        for n in [64, 128] {
            let g = Grid::line(-4.0, 4.0, n, Boundary::Dirichlet, 0.1 / n as f64).unwrap();
            let tr = Trajectory::sample(&g, &sol, 0.0, 5).unwrap();
            l2.push(residual(&p, &tr).unwrap().linf());
        }
        let ratio = l2[0] / l2[1];
        assert!((3.0..5.0).contains(&ratio), "{l2:?}");
    }

    #[test]
    fn constant_trajectory_has_zero_residual() {
        let g = Grid::square(-1.0, 1.0, 16, Boundary::Periodic, 0.01).unwrap();
        let p = DgParams::builder(2, int(1)).mu(3, int(5)).build().unwrap();
        let tr = Trajectory::sample(&g, &Gauged { inner: ConstSol, lambda: 1.0, gamma: 0.0 }, 0.0, 4).unwrap();
        let res = residual(&p, &tr).unwrap();
        assert_eq!(res.linf(), 0.0);
        assert_eq!(res.l2(), 0.0);
        assert!(matches!(
            residual(&p, &Trajectory::new(tr.slices[..2].to_vec()).unwrap()),
            Err(Error::TooFewSlices { .. })
        ));
    }

    struct ConstSol;
    impl Solution for ConstSol {
        fn log_polar(&self, _: &[f64], _: f64) -> (f64, f64) {
            (0.1, 3.0)
        }
    }

    #[test]
    fn perturbed_trajectory_detected() {
        let sol = se_solution();
        let p = se_params(-1);
        let g = Grid::line(-4.0, 4.0, 128, Boundary::Dirichlet, 1e-3).unwrap();
        let tr = Trajectory::sample(&g, &sol, 0.0, 5).unwrap();
        let bad = tr.map(|f| f.map_pointwise(|x, r, s| Ok((r, s + 0.01 * x[0])))).unwrap();
        assert!(residual(&p, &bad).unwrap().linf() > 1e-3);
        assert!(residual(&p, &tr).unwrap().linf() < 1e-2);
    }

    #[test]
    fn heat_residual_second_order() {
        for dir in [HeatDirection::Forward, HeatDirection::Backward] {
            let t0 = if dir == HeatDirection::Forward { -0.2 } else { 0.0 };
            let m = HeatMoments { offset: 1.0, amplitude: 0.5, center: vec![0.1], width: 1.0 };
            let h = heat_solution(0.5, dir, m).unwrap();
            let e: Vec<f64> = [64, 128]
                .iter()
                .map(|&n| {
                    let g = Grid::line(-4.0, 4.0, n, Boundary::Dirichlet, 0.05 / n as f64).unwrap();
                    heat_residual(&h, &g, t0, 4).unwrap().linf
                })
                .collect();
            assert!((3.0..5.0).contains(&(e[0] / e[1])), "{dir:?} {e:?}");
        }
    }

    #[test]
    fn heat_stays_positive() {
        let h = heat_solution(
            1.0,
            HeatDirection::Backward,
            HeatMoments { offset: 0.1, amplitude: 2.0, center: vec![0.0, 0.0], width: 0.5 },
        )
        .unwrap();
        let g = Grid::square(-4.0, 4.0, 32, Boundary::Dirichlet, 0.05).unwrap();
        let mut x = [0.0; 2];
        for n in 0..=10 {
            for k in 0..g.len() {
                g.point(k, &mut x);
                assert!(h.value(&x, 0.05 * n as f64) > 0.0);
            }
        }
    }

    #[test]
    fn se_residual_of_packet_converges() {
        let sol = se_solution();
        let e: Vec<f64> = [64, 128]
            .iter()
            .map(|&n| {
                let g = Grid::line(-4.0, 4.0, n, Boundary::Dirichlet, 0.1 / n as f64).unwrap();
                se_residual(-1.0, &Trajectory::sample(&g, &sol, 0.0, 4).unwrap()).unwrap().linf
            })
            .collect();
        assert!((3.0..5.0).contains(&(e[0] / e[1])), "{e:?}");
    }
}
