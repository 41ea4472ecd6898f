//! One-parameter groups generated by the symmetry fields.
//!
//! Every generator here has `ξ = ξ(x, t)` and `τ = τ(t)`, so a flow maps a time slice `t₀` to
//! a time slice `t̃(t₀)`. A flow is applied to a field by pulling each output node back to
//! its source point, interpolating the source field there, and pushing the values forward.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{exp_rates, GeneratorName};
use crate::error::{Error, Result};
use crate::linearize::{linearization_data, z_heat_point, z_se_point, LinearizationData};
use crate::params::{to_f64, DgParams};
use crate::pde::{interp, Grid, LogPolarField};
use crate::symexpr::{CompiledExpr, Var, VectorFieldSpec};

/// A point `(x, t, r, s)` of the jet base.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowPoint {
    /// Spatial coordinates.
    pub x: Vec<f64>,
    /// Time.
    pub t: f64,
    /// Log-amplitude.
    pub r: f64,
    /// Phase.
    pub s: f64,
}

struct Ctx<'a> {
    name: &'a GeneratorName,
    eps: f64,
    n: usize,
    nu1: f64,
    mu1: f64,
    gamma2: f64,
    iota2: f64,
    rates: Option<(f64, f64, f64)>,
    yf: Option<Vec<f64>>,
    lin: Option<LinearizationData>,
}

impl<'a> Ctx<'a> {
    fn new(name: &'a GeneratorName, eps: f64, p: &DgParams) -> Result<Self> {
        name.check_indices(p.n())?;
        if !eps.is_finite() {
            return Err(Error::InvalidArgument(format!("flow parameter {eps}")));
        }
        let nu1 = to_f64(p.nu1());
        let nu2 = to_f64(p.nu2());
        let mu1 = to_f64(p.mu1());
        let rates = match name {
            GeneratorName::F => {
                let (l, e, k) = exp_rates(p)?;
                Some((to_f64(&l), to_f64(&e), to_f64(&k)))
            }
            _ => None,
        };
        let lin = match name {
            GeneratorName::Zheat(_) | GeneratorName::Zse(_) => {
                name.check_admissible(p)?;
                Some(linearization_data(p)?)
            }
            _ => None,
        };
        if let (GeneratorName::Zheat(pair), Some(d)) = (name, &lin) {
            pair.validate(d)?;
        }
        if let (GeneratorName::Zse(sol), Some(d)) = (name, &lin) {
            d.check_se(sol)?;
        }
        let yf = match name {
            GeneratorName::Yf(f) => Some(f.to_f64_coeffs()),
            _ => None,
        };
        Ok(Self {
            name,
            eps,
            n: p.n(),
            nu1,
            mu1,
            gamma2: 2.0 * nu2 / nu1,
            iota2: to_f64(&(p.mu1() - crate::params::int(2) * p.nu2())),
            rates,
            yf,
            lin,
        })
    }

    fn relocates(&self) -> bool {
        self.eps != 0.0
            && matches!(
                self.name,
                GeneratorName::L(..) | GeneratorName::P(_) | GeneratorName::B(_) | GeneratorName::D | GeneratorName::C
            )
    }

    fn time_forward(&self, t0: f64) -> Result<f64> {
        let e = self.eps;
        Ok(match self.name {
            GeneratorName::H => t0 + e,
            GeneratorName::D => libm::exp(2.0 * e) * t0,
            GeneratorName::A => libm::exp(-e) * t0,
            GeneratorName::C => {
                let den = 1.0 - e * t0;
                if den <= 0.0 {
                    return Err(Error::SingularFlow(format!("1 - eps*t = {den} for C at t = {t0}")));
                }
                t0 / den
            }
            _ => t0,
        })
    }

    /// Source position of target `x` on the source slice `t0`.
    fn space_backward(&self, x: &[f64], t0: f64, out: &mut [f64]) {
        out[..x.len()].copy_from_slice(x);
        let e = self.eps;
        match *self.name {
            GeneratorName::P(j) => out[j - 1] -= e,
            GeneratorName::B(j) => out[j - 1] -= e * t0,
            GeneratorName::D => out.iter_mut().for_each(|v| *v *= libm::exp(-e)),
            GeneratorName::C => out.iter_mut().for_each(|v| *v *= 1.0 - e * t0),
            GeneratorName::L(j, k) => {
                let (c, s) = (libm::cos(e), libm::sin(e));
                out[j - 1] = c * x[j - 1] + s * x[k - 1];
                out[k - 1] = -s * x[j - 1] + c * x[k - 1];
            }
            _ => {}
        }
    }

    fn space_forward(&self, x0: &[f64], t0: f64, out: &mut [f64]) {
        out[..x0.len()].copy_from_slice(x0);
        let e = self.eps;
        match *self.name {
            GeneratorName::P(j) => out[j - 1] += e,
            GeneratorName::B(j) => out[j - 1] += e * t0,
            GeneratorName::D => out.iter_mut().for_each(|v| *v *= libm::exp(e)),
            GeneratorName::C => out.iter_mut().for_each(|v| *v /= 1.0 - e * t0),
            GeneratorName::L(j, k) => {
                let (c, s) = (libm::cos(e), libm::sin(e));
                out[j - 1] = c * x0[j - 1] - s * x0[k - 1];
                out[k - 1] = s * x0[j - 1] + c * x0[k - 1];
            }
            _ => {}
        }
    }

    /// New `(r, s)` for source point `(x0, t0, r0, s0)`.
    fn vertical(&self, x0: &[f64], t0: f64, r0: f64, s0: f64) -> Result<(f64, f64)> {
        let e = self.eps;
        let n = self.n as f64;
        let nu1 = self.nu1;
        let out = match self.name {
            GeneratorName::L(..) | GeneratorName::H | GeneratorName::P(_) => (r0, s0),
            GeneratorName::D => (r0 - 0.5 * n * e, s0 + n * self.mu1 * e / (2.0 * nu1)),
            GeneratorName::C => {
                let den = 1.0 - e * t0;
                if den <= 0.0 {
                    return Err(Error::SingularFlow(format!("1 - eps*t = {den} for C")));
                }
                let l = libm::log(den);
                let x2: f64 = x0.iter().map(|v| v * v).sum();
                (r0 + 0.5 * n * l, s0 - x2 * e / (4.0 * nu1 * den) - n * self.mu1 / (2.0 * nu1) * l)
            }
            GeneratorName::B(j) => (r0, s0 - (e * x0[j - 1] + 0.5 * e * e * t0) / (2.0 * nu1)),
            GeneratorName::E => (r0, s0 - e / (2.0 * nu1)),
            GeneratorName::R => (r0 + e, s0),
            GeneratorName::A => (r0, s0 + libm::expm1(e) * (self.gamma2 * r0 + s0)),
            GeneratorName::F => {
                let (lambda, eta, kappa) = self.rates.expect("rates computed for F");
                f_point(eta, lambda, kappa, e, r0, s0)?
            }
            GeneratorName::Yf(_) => {
                let c = self.yf.as_deref().expect("coefficients computed for Yf");
                let f = |z: f64| c.iter().rev().fold(0.0, |acc, a| acc * z + a);
                yf_point(&f, self.iota2, self.gamma2, self.mu1, nu1, e, r0, s0)?
            }
            GeneratorName::Zheat(pair) => {
                let d = self.lin.as_ref().expect("data computed for Z");
                let plus = pair.plus.checked_value(x0, t0)?;
                let minus = pair.minus.checked_value(x0, t0)?;
                z_heat_point(d, plus, minus, e, r0, s0)?
            }
            GeneratorName::Zse(sol) => {
                let d = self.lin.as_ref().expect("data computed for Z");
                let (rp, sp) = crate::pde::Solution::log_polar(sol, x0, t0);
                z_se_point(d, rp, sp, e, r0, s0)?
            }
        };
        if !(out.0.is_finite() && out.1.is_finite()) {
            return Err(Error::Overflow(format!("flow of {} produced a non-finite value", self.name)));
        }
        Ok(out)
    }
}

/// Closed-form flow of `F = e^{ηr+λs}(∂_r − κ∂_s)` at one point.
fn f_point(eta: f64, lambda: f64, kappa: f64, eps: f64, r0: f64, s0: f64) -> Result<(f64, f64)> {
    let c = eta - lambda * kappa;
    let w0 = eta * r0 + lambda * s0;
    let dr = if c == 0.0 {
        eps * libm::exp(w0)
    } else {
        let arg = -c * eps * libm::exp(w0);
        if arg <= -1.0 {
            return Err(Error::SingularFlow(format!("F flow leaves its domain (1 + {arg} <= 0)")));
        }
        -libm::log1p(arg) / c
    };
    Ok((r0 + dr, s0 - kappa * dr))
}

/// Flow of `Y_f` at one point, for any scalar `f`.
#[allow(clippy::too_many_arguments)]
fn yf_point(
    f: &dyn Fn(f64) -> f64,
    iota2: f64,
    gamma2: f64,
    mu1: f64,
    nu1: f64,
    eps: f64,
    r0: f64,
    s0: f64,
) -> Result<(f64, f64)> {
    let z0 = mu1 * r0 + nu1 * s0;
    let dr = if iota2 == 0.0 { eps * f(z0) } else { (integrate_scalar(&|z| iota2 * f(z), z0, eps)? - z0) / iota2 };
    Ok((r0 + dr, s0 - gamma2 * dr))
}

fn rk4_scalar(g: &dyn Fn(f64) -> f64, z0: f64, len: f64, steps: usize) -> f64 {
    let h = len / steps as f64;
    let mut z = z0;
    for _ in 0..steps {
        let k1 = g(z);
        let k2 = g(z + 0.5 * h * k1);
        let k3 = g(z + 0.5 * h * k2);
        let k4 = g(z + h * k3);
        z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    z
}

/// Integrates `z' = g(z)` over `[0, len]` with step doubling until successive RK4 results agree
/// to about 1e-13 relative.
fn integrate_scalar(g: &dyn Fn(f64) -> f64, z0: f64, len: f64) -> Result<f64> {
    if len == 0.0 {
        return Ok(z0);
    }
    let mut steps = 32;
    let mut prev = rk4_scalar(g, z0, len, steps);
    while steps < 1 << 18 {
        steps *= 2;
        let next = rk4_scalar(g, z0, len, steps);
        if !next.is_finite() {
            return Err(Error::SingularFlow("scalar flow escaped to infinity".into()));
        }
        if (next - prev).abs() <= 1e-13 * (1.0 + next.abs()) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::SingularFlow("scalar flow did not converge (near a blow-up)".into()))
}

/// Time `t̃` reached from the slice `t0` under the flow of `name`.
pub fn time_map(name: &GeneratorName, eps: f64, t0: f64) -> Result<f64> {
    // Only the time part is needed, which never depends on the parameter point.
    let e = eps;
    let probe =
        Ctx { name, eps: e, n: 0, nu1: 1.0, mu1: 0.0, gamma2: 0.0, iota2: 0.0, rates: None, yf: None, lin: None };
    probe.time_forward(t0)
}

pub(crate) fn time_inverse(name: &GeneratorName, eps: f64, t: f64) -> Result<f64> {
    time_map(name, -eps, t)
}

/// Maps one point `(x, t, r, s)` along the flow of `name` by `eps`.
pub fn flow_point(name: &GeneratorName, eps: f64, p: &DgParams, pt: &FlowPoint) -> Result<FlowPoint> {
    let cx = Ctx::new(name, eps, p)?;
    if pt.x.len() != p.n() {
        return Err(Error::ArityMismatch { left: pt.x.len(), right: p.n() });
    }
    let t = cx.time_forward(pt.t)?;
    let mut x = vec![0.0; pt.x.len()];
    cx.space_forward(&pt.x, pt.t, &mut x);
    let (r, s) = cx.vertical(&pt.x, pt.t, pt.r, pt.s)?;
    Ok(FlowPoint { x, t, r, s })
}

/// Applies the closed-form flow of `name` to a field; the result lives on the same grid at
/// the mapped time.
pub fn flow_closed(name: &GeneratorName, eps: f64, field: &LogPolarField, p: &DgParams) -> Result<LogPolarField> {
    flow_closed_onto(name, eps, field, p, field.grid())
}

/// Like [`flow_closed`] but samples the result on `target`; grid-relocating flows (`L`, `P`,
/// `B`, `D`, `C`) interpolate the source field with cubic Lagrange stencils and fail with
/// [`Error::OutOfSupport`] when a preimage leaves the source grid.
pub fn flow_closed_onto(
    name: &GeneratorName,
    eps: f64,
    field: &LogPolarField,
    p: &DgParams,
    target: &Grid,
) -> Result<LogPolarField> {
    let cx = Ctx::new(name, eps, p)?;
    let g = field.grid();
    if g.dim() != p.n() || target.dim() != p.n() {
        return Err(Error::Grid("field dimension differs from the parameter dimension".into()));
    }
    let t0 = field.t();
    let t1 = cx.time_forward(t0)?;
    let direct = !cx.relocates() && target == g;
    let mut r = vec![0.0; target.len()];
    let mut s = vec![0.0; target.len()];
    let (mut xt, mut x0) = ([0.0; 2], [0.0; 2]);
    let d = g.dim();
    for k in 0..target.len() {
        target.point(k, &mut xt);
        cx.space_backward(&xt[..d], t0, &mut x0[..d]);
        let (r0, s0) = if direct { (field.r()[k], field.s()[k]) } else { interp::sample(field, &x0[..d])? };
        let (a, b) = cx.vertical(&x0[..d], t0, r0, s0)?;
        r[k] = a;
        s[k] = b;
    }
    LogPolarField::new(target.clone(), t1, r, s)
}

/// Box `[lo, hi]` of source positions needed to fill `target` at source time `t0`.
pub(crate) fn preimage_box(
    name: &GeneratorName,
    eps: f64,
    p: &DgParams,
    target: &Grid,
    t0: f64,
) -> Result<([f64; 2], [f64; 2])> {
    let cx = Ctx::new(name, eps, p)?;
    let d = target.dim();
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    let mut corner = [0.0; 2];
    let mut x0 = [0.0; 2];
    for mask in 0..(1usize << d) {
        for (a, c) in corner.iter_mut().enumerate().take(d) {
            *c = if mask >> a & 1 == 1 { target.hi(a) } else { target.lo(a) };
        }
        cx.space_backward(&corner[..d], t0, &mut x0[..d]);
        for a in 0..d {
            lo[a] = lo[a].min(x0[a]);
            hi[a] = hi[a].max(x0[a]);
        }
    }
    Ok((lo, hi))
}

/// Flow of `Y_f` for an arbitrary scalar function `f`, applied pointwise to a field.
pub fn flow_yf_with(p: &DgParams, f: &dyn Fn(f64) -> f64, eps: f64, field: &LogPolarField) -> Result<LogPolarField> {
    let nu1 = to_f64(p.nu1());
    let mu1 = to_f64(p.mu1());
    let gamma2 = 2.0 * to_f64(p.nu2()) / nu1;
    let iota2 = to_f64(&(p.mu1() - crate::params::int(2) * p.nu2()));
    field.map_pointwise(|_, r, s| yf_point(f, iota2, gamma2, mu1, nu1, eps, r, s))
}

/// A vector field evaluable in floating point, with `ξ = ξ(x, t)` and `τ = τ(t)`.
pub trait VectorField {
    /// Spatial dimension.
    fn dim(&self) -> usize;
    /// Writes `ξ(x, t)` into `xi` and returns `τ(t)`.
    fn horizontal(&self, x: &[f64], t: f64, xi: &mut [f64]) -> f64;
    /// `(φ, σ)` at `(x, t, r, s)`.
    fn vertical(&self, x: &[f64], t: f64, r: f64, s: f64) -> (f64, f64);
}

/// Floating-point snapshot of a [`VectorFieldSpec`].
#[derive(Clone, Debug)]
pub struct CompiledField {
    xi: Vec<CompiledExpr>,
    tau: CompiledExpr,
    phi: CompiledExpr,
    sigma: CompiledExpr,
}

impl CompiledField {
    /// Compiles `x` after checking that `ξ` is free of `(r, s)` and `τ` depends on `t` only.
    pub fn new(x: &VectorFieldSpec) -> Result<Self> {
        let n = x.n();
        let bad_xi = x.xis().iter().any(|e| e.depends_on(Var::R) || e.depends_on(Var::S));
        let tau = x.tau();
        let bad_tau = tau.depends_on(Var::R) || tau.depends_on(Var::S) || (1..=n).any(|j| tau.depends_on(Var::X(j)));
        if bad_xi || bad_tau {
            return Err(Error::NotReduced("flow needs xi(x, t) and tau(t)".into()));
        }
        Ok(Self {
            xi: x.xis().iter().map(|e| e.compile()).collect(),
            tau: tau.compile(),
            phi: x.phi().compile(),
            sigma: x.sigma().compile(),
        })
    }
}

impl VectorField for CompiledField {
    fn dim(&self) -> usize {
        self.xi.len()
    }
    fn horizontal(&self, x: &[f64], t: f64, xi: &mut [f64]) -> f64 {
        for (o, e) in xi.iter_mut().zip(&self.xi) {
            *o = e.eval(x, t, 0.0, 0.0);
        }
        self.tau.eval(x, t, 0.0, 0.0)
    }
    fn vertical(&self, x: &[f64], t: f64, r: f64, s: f64) -> (f64, f64) {
        (self.phi.eval(x, t, r, s), self.sigma.eval(x, t, r, s))
    }
}

/// State `(x₁, x₂, t, r, s)` of the characteristic system (unused slots stay zero).
type State = [f64; 5];

fn deriv(v: &dyn VectorField, d: usize, y: &State, with_vertical: bool) -> State {
    let mut out = [0.0; 5];
    let mut xi = [0.0; 2];
    let tau = v.horizontal(&y[..d], y[2], &mut xi[..d]);
    out[..d].copy_from_slice(&xi[..d]);
    out[2] = tau;
    if with_vertical {
        let (a, b) = v.vertical(&y[..d], y[2], y[3], y[4]);
        out[3] = a;
        out[4] = b;
    }
    out
}

fn rk4(v: &dyn VectorField, d: usize, y0: State, len: f64, steps: usize, with_vertical: bool) -> State {
    let h = len / steps as f64;
    let mut y = y0;
    let add = |a: &State, b: &State, c: f64| -> State { core::array::from_fn(|i| a[i] + c * b[i]) };
    for _ in 0..steps {
        let k1 = deriv(v, d, &y, with_vertical);
        let k2 = deriv(v, d, &add(&y, &k1, 0.5 * h), with_vertical);
        let k3 = deriv(v, d, &add(&y, &k2, 0.5 * h), with_vertical);
        let k4 = deriv(v, d, &add(&y, &k3, h), with_vertical);
        y = core::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    }
    y
}

/// Integrates the characteristic equations of `x` with `steps` RK4 steps and applies the
/// result to `field` (pull back positions, interpolate, push forward).
pub fn flow_numeric(x: &VectorFieldSpec, eps: f64, field: &LogPolarField, steps: usize) -> Result<LogPolarField> {
    flow_numeric_field(&CompiledField::new(x)?, eps, field, steps)
}

/// [`flow_numeric`] for any [`VectorField`].
pub fn flow_numeric_field(v: &dyn VectorField, eps: f64, field: &LogPolarField, steps: usize) -> Result<LogPolarField> {
    flow_numeric_onto(v, eps, field, field.grid(), steps)
}

/// [`flow_numeric_field`] sampled on `target`.
pub fn flow_numeric_onto(
    v: &dyn VectorField,
    eps: f64,
    field: &LogPolarField,
    target: &Grid,
    steps: usize,
) -> Result<LogPolarField> {
    if steps == 0 {
        return Err(Error::InvalidArgument("flow_numeric needs at least one step".into()));
    }
    let g = target;
    let d = g.dim();
    if field.grid().dim() != d {
        return Err(Error::ArityMismatch { left: field.grid().dim(), right: d });
    }
    if v.dim() != d {
        return Err(Error::ArityMismatch { left: v.dim(), right: d });
    }
    let t0 = field.t();
    let t1 = rk4(v, d, [0.0, 0.0, t0, 0.0, 0.0], eps, steps, false)[2];
    if !t1.is_finite() {
        return Err(Error::Overflow("time left the representable range".into()));
    }
    let mut r = vec![0.0; g.len()];
    let mut s = vec![0.0; g.len()];
    let mut xt = [0.0; 2];
    for k in 0..g.len() {
        g.point(k, &mut xt);
        let back = rk4(v, d, [xt[0], xt[1], t1, 0.0, 0.0], -eps, steps, false);
        let moved = target != field.grid() || (0..d).any(|a| back[a] != xt[a]);
        let (r0, s0) = if moved { interp::sample(field, &back[..d])? } else { (field.r()[k], field.s()[k]) };
        let y = rk4(v, d, [back[0], back[1], t0, r0, s0], eps, steps, true);
        if !(y[3].is_finite() && y[4].is_finite()) {
            return Err(Error::Overflow(format!("characteristic from node {k} diverged")));
        }
        r[k] = y[3];
        s[k] = y[4];
    }
    LogPolarField::new(g.clone(), t1, r, s)
}
