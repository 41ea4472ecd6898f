//! Linearizing transformations of the Ehrenfest subfamily.
//!
//! For `ι₁ < 0` the infinite part of the symmetry algebra is generated by pairs of positive
//! heat solutions, for `ι₁ > 0` by free Schroedinger solutions. Both flows are integrated in
//! closed form through quantities that move linearly in `ε`:
//!
//! * heat: `p = e^{r+|λ|u}`, `m = e^{r−|λ|u}` with `u = (2ν₂/ν₁)r + s` obey `p' = 2|λ|Φ₋`,
//!   `m' = 2|λ|Φ₊`;
//! * Schroedinger: `W = e^{r+iu/Λ}` obeys `W' = (2i/Λ)Ψ`.
//!
//! This fixes the branch without sign choices: the flow stops with an error when `p`, `m` or
//! `W` reaches zero.

use alloc::format;
use alloc::vec;

use num_complex::Complex64;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::params::{classify, compute_invariants, int, to_f64, DgParams, GaugeElement, Rational, SymmetryClass};
use crate::pde::{
    heat_solution, se_gaussian, Gauged, Grid, HeatDirection, HeatMoments, HeatSolution, LogPolarField, SeMoments,
    SePacket, SeSolution, Solution, Trajectory,
};
use crate::symmetry::VectorField;

/// Whether `λ` is real (heat case) or imaginary (Schroedinger case).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `ι₁ < 0`.
    Real,
    /// `ι₁ > 0`.
    Imaginary,
}

/// Constants of the linearization at one parameter point.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearizationData {
    /// `λ² = ν₁² / (4ν₂² − 2ν₁μ₂)`.
    pub lambda_sq: Rational,
    /// Real or imaginary `λ`.
    pub branch: Branch,
    /// `Λ = √(2ι₁)/|ν₁|` in the imaginary case.
    pub lambda_cap: Option<f64>,
    /// `γ = −2ν₂/ν₁`.
    pub gamma: f64,
    /// `D = √(4ν₂² − 2ν₁μ₂)` in the real case.
    pub diffusion: Option<f64>,
    /// Coefficient `ν₁Λ` of the target equation `iΨ_t = ν₁ΛΔΨ` in the imaginary case.
    pub se_coefficient: Option<f64>,
    n: usize,
    nu1: f64,
}

/// Computes the linearization constants; fails unless `p` is of class `Sym1b` or `Sym1c`.
pub fn linearization_data(p: &DgParams) -> Result<LinearizationData> {
    let class = classify(p);
    if !matches!(class, SymmetryClass::Sym1b | SymmetryClass::Sym1c) {
        return Err(Error::NotLinearizable(class));
    }
    let iota1 = compute_invariants(p).iota1;
    let denom = int(4) * p.nu2() * p.nu2() - int(2) * p.nu1() * p.mu2();
    let lambda_sq = p.nu1() * p.nu1() / &denom;
    let nu1 = to_f64(p.nu1());
    let gamma = -2.0 * to_f64(p.nu2()) / nu1;
    let (branch, lambda_cap, diffusion, se_coefficient) = if iota1.is_negative() {
        (Branch::Real, None, Some(libm::sqrt(to_f64(&denom))), None)
    } else {
        let cap = libm::sqrt(2.0 * to_f64(&iota1)) / nu1.abs();
        (Branch::Imaginary, Some(cap), None, Some(nu1 * cap))
    };
    Ok(LinearizationData { lambda_sq, branch, lambda_cap, gamma, diffusion, se_coefficient, n: p.n(), nu1 })
}

impl LinearizationData {
    /// `|λ|`.
    pub fn abs_lambda(&self) -> f64 {
        libm::sqrt(to_f64(&self.lambda_sq).abs())
    }

    /// `2ν₂/ν₁ = −γ`.
    pub fn gamma2(&self) -> f64 {
        -self.gamma
    }

    /// Direction of `Φ₊`: forward for `ν₁ > 0`, backward otherwise.
    pub fn plus_direction(&self) -> HeatDirection {
        if self.nu1 > 0.0 {
            HeatDirection::Forward
        } else {
            HeatDirection::Backward
        }
    }

    /// The gauge `N_{(Λ,γ)}` taking Schroedinger solutions to DG solutions (imaginary case).
    pub fn se_gauge(&self) -> Result<(f64, f64)> {
        match self.lambda_cap {
            Some(cap) => Ok((cap, self.gamma)),
            None => Err(Error::InvalidArgument("real branch has no Schroedinger gauge".into())),
        }
    }

    /// Checks that `sol` solves `iΨ_t = ν₁ΛΔΨ` in the right dimension.
    pub fn check_se(&self, sol: &SeSolution) -> Result<()> {
        let a = self
            .se_coefficient
            .ok_or_else(|| Error::InvalidArgument("real branch takes heat data, not a Schroedinger solution".into()))?;
        if (sol.a() - a).abs() > 1e-12 * a.abs() {
            return Err(Error::InvalidArgument(format!("Schroedinger coefficient {} differs from {a}", sol.a())));
        }
        if sol.dim() != self.n {
            return Err(Error::ArityMismatch { left: sol.dim(), right: self.n });
        }
        Ok(())
    }
}

/// `N_g` applied pointwise: `r' = r`, `s' = γr + Λs`.
pub fn gauge_act_field(g: &GaugeElement, psi: &LogPolarField) -> LogPolarField {
    let (lambda, gamma) = g.to_f64();
    gauge_act_field_f64(lambda, gamma, psi)
}

/// [`gauge_act_field`] for floating-point `(Λ, γ)`, as needed for irrational `Λ`.
pub fn gauge_act_field_f64(lambda: f64, gamma: f64, psi: &LogPolarField) -> LogPolarField {
    let mut out = psi.clone();
    let (r, s) = out.values_mut();
    for (si, ri) in s.iter_mut().zip(r.iter()) {
        *si = gamma * *ri + lambda * *si;
    }
    out
}

/// Applies [`gauge_act_field`] to every slice.
pub fn gauge_act_trajectory(g: &GaugeElement, traj: &Trajectory) -> Result<Trajectory> {
    traj.map(|f| Ok(gauge_act_field(g, f)))
}

/// Positive heat solutions `(Φ₊, Φ₋)` of opposite time orientation.
#[derive(Clone, Debug, PartialEq)]
pub struct HeatPair {
    /// `Φ₊`.
    pub plus: HeatSolution,
    /// `Φ₋`.
    pub minus: HeatSolution,
}

impl HeatPair {
    /// Checks diffusion coefficient, orientations and dimension against `d`.
    pub fn validate(&self, d: &LinearizationData) -> Result<()> {
        let diff =
            d.diffusion.ok_or_else(|| Error::HeatMismatch("imaginary branch takes a Schroedinger solution".into()))?;
        for (name, sol, dir) in
            [("plus", &self.plus, d.plus_direction()), ("minus", &self.minus, d.plus_direction().reversed())]
        {
            if (sol.diffusion() - diff).abs() > 1e-12 * diff {
                return Err(Error::HeatMismatch(format!("{name} has diffusion {}, expected {diff}", sol.diffusion())));
            }
            if sol.direction() != dir {
                return Err(Error::HeatMismatch(format!("{name} must be {dir:?}")));
            }
            if sol.moments().center.len() != d.n {
                return Err(Error::ArityMismatch { left: sol.moments().center.len(), right: d.n });
            }
        }
        Ok(())
    }
}

/// A heat pair for `p`: a Gaussian on a constant for `Φ₊`, a constant for `Φ₋`.
pub fn default_heat_pair(p: &DgParams) -> Result<HeatPair> {
    let d = linearization_data(p)?;
    let diff = d.diffusion.ok_or_else(|| Error::HeatMismatch(format!("{} has no heat pair", classify(p))))?;
    let n = p.n();
    let plus = heat_solution(
        diff,
        d.plus_direction(),
        HeatMoments { offset: 1.0, amplitude: 0.5, center: vec![0.0; n], width: 2.0 },
    )?;
    let minus = heat_solution(diff, d.plus_direction().reversed(), HeatMoments::constant(1.0, n))?;
    Ok(HeatPair { plus, minus })
}

/// A nowhere-zero Schroedinger solution for `p`: a Gaussian packet on a unit background.
pub fn default_se_solution(p: &DgParams) -> Result<SeSolution> {
    let d = linearization_data(p)?;
    let a = d
        .se_coefficient
        .ok_or_else(|| Error::InvalidArgument(format!("{} has no Schroedinger solution", classify(p))))?;
    let n = p.n();
    let mut k = vec![0.0; n];
    k[0] = 0.5;
    se_gaussian(
        a,
        SeMoments {
            background: Complex64::new(1.0, 0.0),
            background_wavevector: vec![0.0; n],
            packet: Some(SePacket {
                amplitude: Complex64::new(0.4, 0.0),
                center: vec![0.0; n],
                width: 1.2,
                wavevector: k,
            }),
        },
    )
}

/// The DG solution `ψ = (Φ₊Φ₋)^{½(1−2iν₂/ν₁)} exp((i/2|λ|) ln(Φ₋/Φ₊))` as a closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct HeatPairSolution {
    pair: HeatPair,
    gamma2: f64,
    abs_lambda: f64,
}

impl HeatPairSolution {
    /// Validates `pair` against `p`.
    pub fn new(pair: HeatPair, p: &DgParams) -> Result<Self> {
        let d = linearization_data(p)?;
        pair.validate(&d)?;
        Ok(Self { pair, gamma2: d.gamma2(), abs_lambda: d.abs_lambda() })
    }
}

impl Solution for HeatPairSolution {
    fn log_polar(&self, x: &[f64], t: f64) -> (f64, f64) {
        let lp = libm::log(self.pair.plus.value(x, t));
        let lm = libm::log(self.pair.minus.value(x, t));
        let r = 0.5 * (lp + lm);
        (r, -self.gamma2 * r + (lm - lp) / (2.0 * self.abs_lambda))
    }
}

/// Samples the heat-pair solution on `count` slices `t0 + k·dt`; both `Φ±` must be strictly
/// positive at every node.
pub fn heat_pair_to_dg(pair: &HeatPair, p: &DgParams, grid: &Grid, t0: f64, count: usize) -> Result<Trajectory> {
    let sol = HeatPairSolution::new(pair.clone(), p)?;
    let mut x = [0.0; 2];
    for k in 0..count {
        let t = t0 + k as f64 * grid.dt();
        for i in 0..grid.len() {
            grid.point(i, &mut x);
            pair.plus.checked_value(&x[..grid.dim()], t)?;
            pair.minus.checked_value(&x[..grid.dim()], t)?;
        }
    }
    Trajectory::sample(grid, &sol, t0, count)
}

/// The DG solution `N_{(Λ,γ)}Ψ` built from a Schroedinger solution.
pub fn se_to_dg_solution(sol: SeSolution, p: &DgParams) -> Result<Gauged<SeSolution>> {
    let d = linearization_data(p)?;
    d.check_se(&sol)?;
    let (lambda, gamma) = d.se_gauge()?;
    Ok(Gauged { inner: sol, lambda, gamma })
}

/// Maps a DG field of a `Sym1c` point to a solution slice of `iΨ_t = ν₁ΛΔΨ` (inverse gauge).
pub fn dg_to_se(field: &LogPolarField, p: &DgParams) -> Result<LogPolarField> {
    let (lambda, gamma) = linearization_data(p)?.se_gauge()?;
    Ok(gauge_act_field_f64(1.0 / lambda, -gamma / lambda, field))
}

/// `ln(e^a + sign·e^b)`, or `None` when the result would be non-positive.
fn ln_add(a: f64, b: f64, sign: f64) -> Option<f64> {
    if sign > 0.0 {
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        Some(hi + libm::log1p(libm::exp(lo - hi)))
    } else if a > b {
        Some(a + libm::log1p(-libm::exp(b - a)))
    } else {
        None
    }
}

/// Heat flow at one point: `(r, s)` after parameter `eps`, given `Φ±` at that point.
pub fn z_heat_point(
    d: &LinearizationData,
    phi_plus: f64,
    phi_minus: f64,
    eps: f64,
    r0: f64,
    s0: f64,
) -> Result<(f64, f64)> {
    if eps == 0.0 {
        return Ok((r0, s0));
    }
    let l = d.abs_lambda();
    let u0 = d.gamma2() * r0 + s0;
    let step = |phi: f64| libm::log(2.0 * l * phi * eps.abs());
    let sign = eps.signum();
    let lp = ln_add(r0 + l * u0, step(phi_minus), sign);
    let lm = ln_add(r0 - l * u0, step(phi_plus), sign);
    match (lp, lm) {
        (Some(lp), Some(lm)) => Ok(heat_from_logs(d, lp, lm)),
        _ => Err(Error::NonPositive(format!("heat flow argument vanishes at eps = {eps}"))),
    }
}

fn heat_from_logs(d: &LinearizationData, lp: f64, lm: f64) -> (f64, f64) {
    let r = 0.5 * (lp + lm);
    let u = (lp - lm) / (2.0 * d.abs_lambda());
    (r, u - d.gamma2() * r)
}

/// Heat flow started from `ψ₀ ≡ 0` (`r₀ → −∞`); needs `eps > 0`.
pub fn z_heat_vacuum_point(d: &LinearizationData, phi_plus: f64, phi_minus: f64, eps: f64) -> Result<(f64, f64)> {
    let l = d.abs_lambda();
    let (a, b) = (2.0 * l * phi_minus * eps, 2.0 * l * phi_plus * eps);
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::NonPositive(format!("vacuum heat flow needs eps > 0 and positive data (eps = {eps})")));
    }
    Ok(heat_from_logs(d, libm::log(a), libm::log(b)))
}

/// Schroedinger flow at one point, given `Ψ = e^{r_Ψ + i s_Ψ}` at that point.
pub fn z_se_point(d: &LinearizationData, r_psi: f64, s_psi: f64, eps: f64, r0: f64, s0: f64) -> Result<(f64, f64)> {
    if eps == 0.0 {
        return Ok((r0, s0));
    }
    let (cap, _) = d.se_gauge()?;
    let u0 = d.gamma2() * r0 + s0;
    // W/W₀ = 1 + q with q = (2iε/Λ)|Ψ|e^{−r₀} e^{i(argΨ − u₀/Λ)}.
    let q = Complex64::new(0.0, 2.0 * eps / cap) * Complex64::from_polar(libm::exp(r_psi - r0), s_psi - u0 / cap);
    let w = Complex64::new(1.0, 0.0) + q;
    if w.norm() == 0.0 || !w.norm().is_finite() {
        return Err(Error::SingularFlow(format!("Schroedinger flow passes through zero at eps = {eps}")));
    }
    let r = r0 + libm::log(w.norm());
    let u = u0 + cap * w.arg();
    Ok((r, u - d.gamma2() * r))
}

/// Schroedinger flow started from `ψ₀ ≡ 0`; the result is `N_{(Λ,γ)}` of `(2iε/Λ)Ψ`.
pub fn z_se_vacuum_point(d: &LinearizationData, r_psi: f64, s_psi: f64, eps: f64) -> Result<(f64, f64)> {
    let (cap, _) = d.se_gauge()?;
    if eps == 0.0 {
        return Err(Error::SingularFlow("vacuum flow needs eps != 0".into()));
    }
    let c = 2.0 * eps / cap;
    let r = r_psi + libm::log(c.abs());
    let u = cap * (s_psi + c.signum() * core::f64::consts::FRAC_PI_2);
    Ok((r, u - d.gamma2() * r))
}

/// Applies the heat flow with parameter `eps` to the slice `psi0`.
pub fn z_flow_heat(pair: &HeatPair, eps: f64, psi0: &LogPolarField, p: &DgParams) -> Result<LogPolarField> {
    let d = linearization_data(p)?;
    pair.validate(&d)?;
    let t = psi0.t();
    psi0.map_pointwise(|x, r, s| {
        z_heat_point(&d, pair.plus.checked_value(x, t)?, pair.minus.checked_value(x, t)?, eps, r, s)
    })
}

/// Heat flow from the zero wavefunction onto `grid` at time `t`.
pub fn z_flow_heat_vacuum(pair: &HeatPair, eps: f64, grid: &Grid, t: f64, p: &DgParams) -> Result<LogPolarField> {
    let d = linearization_data(p)?;
    pair.validate(&d)?;
    let base = LogPolarField::from_fn(grid, t, |_| (0.0, 0.0))?;
    base.map_pointwise(|x, _, _| {
        z_heat_vacuum_point(&d, pair.plus.checked_value(x, t)?, pair.minus.checked_value(x, t)?, eps)
    })
}

/// Applies the Schroedinger flow with parameter `eps` to the slice `psi0`.
pub fn z_flow_se(sol: &SeSolution, eps: f64, psi0: &LogPolarField, p: &DgParams) -> Result<LogPolarField> {
    let d = linearization_data(p)?;
    d.check_se(sol)?;
    let t = psi0.t();
    psi0.map_pointwise(|x, r, s| {
        let (rp, sp) = sol.log_polar(x, t);
        z_se_point(&d, rp, sp, eps, r, s)
    })
}

/// Schroedinger flow from the zero wavefunction onto `grid` at time `t`.
pub fn z_flow_se_vacuum(sol: &SeSolution, eps: f64, grid: &Grid, t: f64, p: &DgParams) -> Result<LogPolarField> {
    let d = linearization_data(p)?;
    d.check_se(sol)?;
    let base = LogPolarField::from_fn(grid, t, |_| (0.0, 0.0))?;
    base.map_pointwise(|x, _, _| {
        let (rp, sp) = sol.log_polar(x, t);
        z_se_vacuum_point(&d, rp, sp, eps)
    })
}

/// The generator `Z_{Φ±}` as a numerically evaluable vector field.
#[derive(Clone, Debug)]
pub struct ZheatField {
    pair: HeatPair,
    data: LinearizationData,
}

impl ZheatField {
    /// Validates `pair` against `p`.
    pub fn new(pair: HeatPair, p: &DgParams) -> Result<Self> {
        let data = linearization_data(p)?;
        pair.validate(&data)?;
        Ok(Self { pair, data })
    }
}

impl VectorField for ZheatField {
    fn dim(&self) -> usize {
        self.data.n
    }
    fn horizontal(&self, _: &[f64], _: f64, xi: &mut [f64]) -> f64 {
        xi.iter_mut().for_each(|v| *v = 0.0);
        0.0
    }
    fn vertical(&self, x: &[f64], t: f64, r: f64, s: f64) -> (f64, f64) {
        let l = self.data.abs_lambda();
        let g2 = self.data.gamma2();
        let u = g2 * r + s;
        let a = self.pair.plus.value(x, t) * libm::exp(l * u - r);
        let b = self.pair.minus.value(x, t) * libm::exp(-l * u - r);
        (l * (a + b), (1.0 - g2 * l) * b - (1.0 + g2 * l) * a)
    }
}

/// The generator `Z_Ψ` as a numerically evaluable vector field.
#[derive(Clone, Debug)]
pub struct ZseField {
    sol: SeSolution,
    data: LinearizationData,
}

impl ZseField {
    /// Validates `sol` against `p`.
    pub fn new(sol: SeSolution, p: &DgParams) -> Result<Self> {
        let data = linearization_data(p)?;
        data.check_se(&sol)?;
        Ok(Self { sol, data })
    }
}

impl VectorField for ZseField {
    fn dim(&self) -> usize {
        self.data.n
    }
    fn horizontal(&self, _: &[f64], _: f64, xi: &mut [f64]) -> f64 {
        xi.iter_mut().for_each(|v| *v = 0.0);
        0.0
    }
    fn vertical(&self, x: &[f64], t: f64, r: f64, s: f64) -> (f64, f64) {
        let cap = self.data.lambda_cap.unwrap_or(f64::NAN);
        let g2 = self.data.gamma2();
        let (rp, sp) = self.sol.log_polar(x, t);
        let theta = (g2 * r + s) / cap - sp;
        let amp = 2.0 / cap * libm::exp(rp - r);
        let (sn, cs) = (libm::sin(theta), libm::cos(theta));
        (amp * sn, amp * (cap * cs - g2 * sn))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{gauge_compose, rat};
    use crate::pde::{residual, se_residual, Boundary};
    use crate::symmetry::flow_numeric_field;

    fn sym1b() -> DgParams {
        DgParams::builder(1, int(1)).mu(2, int(-1)).mu(3, int(-1)).mu(5, rat(1, 2)).build().unwrap()
    }

    fn sym1c() -> DgParams {
        DgParams::builder(1, int(1)).mu(2, int(1)).mu(3, int(-1)).mu(5, rat(-1, 2)).build().unwrap()
    }

    fn sym1b_general() -> DgParams {
        // Gauge image of the plain Sym1b point, so ν₂ and μ₁ are nonzero.
        let g = GaugeElement::new(rat(3, 2), rat(1, 3)).unwrap();
        crate::params::gauge_act_params(&g, &sym1b())
    }

    fn sym1c_general() -> DgParams {
        let g = GaugeElement::new(rat(-2, 3), rat(1, 2)).unwrap();
        crate::params::gauge_act_params(&g, &sym1c())
    }

    #[test]
    fn data_examples() {
        let d = linearization_data(&sym1b()).unwrap();
        assert_eq!(d.lambda_sq, rat(1, 2));
        assert_eq!(d.branch, Branch::Real);
        assert!((d.diffusion.unwrap() - libm::sqrt(2.0)).abs() < 1e-15);
        let d = linearization_data(&sym1c()).unwrap();
        assert_eq!(d.branch, Branch::Imaginary);
        assert!((d.lambda_cap.unwrap() - libm::sqrt(2.0)).abs() < 1e-15);
        assert_eq!(d.gamma, 0.0);
        let se = DgParams::builder(1, int(1)).mu(2, rat(1, 2)).mu(3, int(-1)).mu(5, rat(-1, 4)).build().unwrap();
        let d = linearization_data(&se).unwrap();
        assert!((d.lambda_cap.unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(d.gamma, 0.0);
        assert_eq!(d.se_coefficient, Some(1.0));
        for p in [sym1b(), sym1c(), sym1b_general(), sym1c_general()] {
            let d = linearization_data(&p).unwrap();
            let denom = int(4) * p.nu2() * p.nu2() - int(2) * p.nu1() * p.mu2();
            assert_eq!(&d.lambda_sq * denom, p.nu1() * p.nu1());
        }
    }

    #[test]
    fn other_classes_rejected() {
        let p = SymmetryClass::Sym3.representative(1);
        assert!(matches!(linearization_data(&p), Err(Error::NotLinearizable(SymmetryClass::Sym3))));
        assert!(default_heat_pair(&sym1c()).is_err());
        assert!(default_se_solution(&sym1b()).is_err());
    }

    fn sample_field() -> LogPolarField {
        let g = Grid::line(-2.0, 2.0, 33, Boundary::Dirichlet, 0.01).unwrap();
        LogPolarField::from_fn(&g, 0.0, |x| (0.3 * libm::cos(x[0]) - 0.1, 1.5 * x[0] - 0.2 * x[0] * x[0])).unwrap()
    }

    #[test]
    fn gauge_on_fields() {
        let f = sample_field();
        assert_eq!(gauge_act_field(&GaugeElement::identity(), &f), f);
        let g1 = GaugeElement::new(rat(2, 3), rat(-1, 4)).unwrap();
        let g2 = GaugeElement::new(rat(-5, 2), rat(3, 7)).unwrap();
        let once = gauge_act_field(&gauge_compose(&g1, &g2), &f);
        let twice = gauge_act_field(&g1, &gauge_act_field(&g2, &f));
        assert_eq!(once.r(), f.r());
        let scale = f.s().iter().chain(f.r()).fold(1.0f64, |m, v| m.max(v.abs()));
        let (dr, ds) = once.max_difference(&twice).unwrap();
        assert!(dr == 0.0 && ds < 1e-12 * scale);
    }

    #[test]
    fn constant_pair_gives_unit_solution() {
        let p = sym1b();
        let d = linearization_data(&p).unwrap();
        let one = |dir| heat_solution(d.diffusion.unwrap(), dir, HeatMoments::constant(1.0, 1)).unwrap();
        let pair = HeatPair { plus: one(d.plus_direction()), minus: one(d.plus_direction().reversed()) };
        let g = Grid::line(-2.0, 2.0, 32, Boundary::Dirichlet, 0.01).unwrap();
        let tr = heat_pair_to_dg(&pair, &p, &g, 0.0, 3).unwrap();
        assert!(tr.slices.iter().all(|f| f.r().iter().chain(f.s()).all(|v| *v == 0.0)));
        assert_eq!(residual(&p, &tr).unwrap().linf(), 0.0);
    }

    fn heat_residual_at(p: &DgParams, pair: &HeatPair, points: usize) -> f64 {
        let g = Grid::line(-4.0, 4.0, points, Boundary::Dirichlet, 1e-3 * (64.0 / points as f64)).unwrap();
        let tr = heat_pair_to_dg(pair, p, &g, 0.1, 5).unwrap();
        residual(p, &tr).unwrap().linf()
    }

    #[test]
    fn heat_pair_residual_converges() {
        for p in [sym1b(), sym1b_general()] {
            let pair = default_heat_pair(&p).unwrap();
            let (a, b) = (heat_residual_at(&p, &pair, 64), heat_residual_at(&p, &pair, 128));
            let ratio = a / b;
            assert!(ratio > 3.0 && ratio < 5.0, "{a} {b} {ratio}");
        }
    }

    #[test]
    fn wrong_heat_data_rejected() {
        let p = sym1b();
        let mut pair = default_heat_pair(&p).unwrap();
        core::mem::swap(&mut pair.plus, &mut pair.minus);
        let g = Grid::line(-1.0, 1.0, 16, Boundary::Dirichlet, 0.01).unwrap();
        assert!(matches!(heat_pair_to_dg(&pair, &p, &g, 0.0, 3), Err(Error::HeatMismatch(_))));
        let d = linearization_data(&p).unwrap();
        let wrong = HeatPair {
            plus: heat_solution(1.0, d.plus_direction(), HeatMoments::constant(1.0, 1)).unwrap(),
            minus: heat_solution(1.0, d.plus_direction().reversed(), HeatMoments::constant(1.0, 1)).unwrap(),
        };
        assert!(matches!(heat_pair_to_dg(&wrong, &p, &g, 0.0, 3), Err(Error::HeatMismatch(_))));
        // A shrinking Gaussian that has collapsed is not positive any more.
        let pair = default_heat_pair(&p).unwrap();
        assert!(matches!(heat_pair_to_dg(&pair, &p, &g, 5.0, 3), Err(Error::NonPositive(_))));
    }

    #[test]
    fn vanishing_nu2_reduces_to_plain_form() {
        let p = sym1b();
        let pair = default_heat_pair(&p).unwrap();
        let sol = HeatPairSolution::new(pair.clone(), &p).unwrap();
        let l = libm::sqrt(0.5);
        let (x, t) = ([0.7], 0.05);
        let (fp, fm) = (pair.plus.value(&x, t), pair.minus.value(&x, t));
        let psi = Complex64::new(libm::sqrt(fp * fm), 0.0) * Complex64::new(0.0, libm::log(fm / fp) / (2.0 * l)).exp();
        let (r, s) = sol.log_polar(&x, t);
        let got = Complex64::from_polar(libm::exp(r), s);
        assert!((got - psi).norm() < 1e-14);
    }

    #[test]
    fn heat_flow_identity_and_vacuum() {
        let p = sym1b_general();
        let d = linearization_data(&p).unwrap();
        let pair = default_heat_pair(&p).unwrap();
        let f = sample_field();
        assert_eq!(z_flow_heat(&pair, 0.0, &f, &p).unwrap(), f);
        // Starting from ψ₀ ≡ 0 with ε = 1/(2|λ|) reproduces the heat-pair map.
        let eps = 0.5 / d.abs_lambda();
        let vac = z_flow_heat_vacuum(&pair, eps, f.grid(), 0.1, &p).unwrap();
        let direct =
            LogPolarField::from_solution(f.grid(), 0.1, &HeatPairSolution::new(pair.clone(), &p).unwrap()).unwrap();
        let (dr, ds) = vac.max_difference(&direct).unwrap();
        assert!(dr.max(ds) < 1e-13);
        // Far below the vacuum, the ordinary flow approaches the vacuum flow.
        let deep = f.map_pointwise(|_, _, s| Ok((-40.0, s))).unwrap().with_time(0.1);
        let out = z_flow_heat(&pair, eps, &deep, &p).unwrap();
        let (dr, ds) = out.max_difference(&vac).unwrap();
        assert!(dr.max(ds) < 1e-10, "{dr} {ds}");
    }

    #[test]
    fn heat_flow_matches_printed_closed_form() {
        let p = sym1b_general();
        let d = linearization_data(&p).unwrap();
        let (l, g2) = (d.abs_lambda(), d.gamma2());
        let (fp, fm) = (1.3, 0.7);
        for &(r0, s0, eps) in &[(0.2, -0.3, 0.4), (-0.5, 1.1, 0.05), (0.1, 0.2, -0.1), (1.0, -2.0, 2.0)] {
            let (r, s) = z_heat_point(&d, fp, fm, eps, r0, s0).unwrap();
            let u0 = g2 * r0 + s0;
            let q = |e: f64| {
                4.0 * fp * fm * l * l * e * e
                    + 2.0 * libm::exp(r0) * l * (fp * libm::exp(l * u0) + fm * libm::exp(-l * u0)) * e
                    + libm::exp(2.0 * r0)
            };
            let dq = 8.0 * fp * fm * l * l * eps
                + 2.0 * libm::exp(r0) * l * (fp * libm::exp(l * u0) + fm * libm::exp(-l * u0));
            let r_ref = 0.5 * libm::log(q(eps));
            assert!((r - r_ref).abs() < 1e-13);
            let rp = dq / (2.0 * q(eps));
            let xq = rp * libm::exp(r_ref) / (2.0 * l * fp);
            let root = libm::sqrt(xq * xq - fm / fp);
            // One of the two signs is the continuous branch.
            let cands = [root + xq, -root + xq].map(|v| -g2 * r_ref + libm::log(v) / l);
            let best = cands.iter().map(|c| (c - s).abs()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-10, "{r0} {s0} {eps}: {s} vs {cands:?}");
        }
    }

    #[test]
    fn heat_flow_rate_at_zero() {
        let p = sym1b_general();
        let d = linearization_data(&p).unwrap();
        let (l, g2) = (d.abs_lambda(), d.gamma2());
        let (fp, fm, r0, s0) = (1.3, 0.7, 0.2, -0.4);
        let h = 1e-5;
        let e2 = |e| libm::exp(2.0 * z_heat_point(&d, fp, fm, e, r0, s0).unwrap().0);
        let fd = (e2(h) - e2(-h)) / (2.0 * h);
        let u0 = g2 * r0 + s0;
        let exact = 2.0 * libm::exp(r0) * l * (fp * libm::exp(l * u0) + fm * libm::exp(-l * u0));
        assert!((fd - exact).abs() < 1e-8 * exact);
    }

    #[test]
    fn heat_flow_matches_numeric_integration() {
        let p = sym1b_general();
        let pair = default_heat_pair(&p).unwrap();
        let f = sample_field().with_time(0.05);
        let field = ZheatField::new(pair.clone(), &p).unwrap();
        for eps in [0.3, -0.05] {
            let a = z_flow_heat(&pair, eps, &f, &p).unwrap();
            let b = flow_numeric_field(&field, eps, &f, 400).unwrap();
            let (dr, ds) = a.max_difference(&b).unwrap();
            assert!(dr.max(ds) < 1e-9, "{eps}: {dr} {ds}");
        }
    }

    #[test]
    fn heat_flow_generates_solutions() {
        let p = sym1b();
        let pair = default_heat_pair(&p).unwrap();
        let base = HeatPairSolution::new(pair.clone(), &p).unwrap();
        // A second pair for the flow; the generated field must still solve the equation.
        let d = linearization_data(&p).unwrap();
        let other = HeatPair {
            plus: heat_solution(d.diffusion.unwrap(), d.plus_direction(), HeatMoments::constant(0.8, 1)).unwrap(),
            minus: heat_solution(
                d.diffusion.unwrap(),
                d.plus_direction().reversed(),
                HeatMoments { offset: 0.5, amplitude: 1.0, center: vec![0.3], width: 1.0 },
            )
            .unwrap(),
        };
        let run = |points: usize| {
            let g = Grid::line(-4.0, 4.0, points, Boundary::Dirichlet, 1e-3 * 64.0 / points as f64).unwrap();
            let tr = Trajectory::sample(&g, &base, 0.1, 5).unwrap();
            let out = tr.map(|s| z_flow_heat(&other, 0.7, s, &p)).unwrap();
            residual(&p, &out).unwrap().linf()
        };
        let (a, b) = (run(64), run(128));
        assert!(a / b > 3.0 && a / b < 5.0, "{a} {b}");
    }

    #[test]
    fn se_flow_identity_and_printed_form() {
        let p = sym1c_general();
        let d = linearization_data(&p).unwrap();
        let sol = default_se_solution(&p).unwrap();
        let f = sample_field();
        assert_eq!(z_flow_se(&sol, 0.0, &f, &p).unwrap(), f);
        let cap = d.lambda_cap.unwrap();
        let g2 = d.gamma2();
        let nu1 = to_f64(p.nu1());
        let nu2 = to_f64(p.nu2());
        let (ra, arg) = (0.3f64, 0.9f64);
        let abs = libm::exp(ra);
        for &(r0, s0, eps) in &[(0.1, 0.2, 0.05), (-0.3, 1.0, 0.1), (0.5, -0.4, -0.08)] {
            let (r, s) = z_se_point(&d, ra, arg, eps, r0, s0).unwrap();
            let th = (g2 * r0 + s0) / cap - arg;
            let q = 4.0 * abs * abs * eps * eps / (cap * cap)
                + 4.0 * libm::exp(r0) * abs * libm::sin(th) * eps / cap
                + libm::exp(2.0 * r0);
            let r_ref = 0.5 * libm::log(q);
            let sn = (2.0 * abs * eps / cap + libm::exp(r0) * libm::sin(th)) / libm::sqrt(q);
            let base = cap * arg - nu2 / nu1 * libm::log(q);
            assert!((r - r_ref).abs() < 1e-13);
            // The printed arcsine fixes the phase only up to its two branches and the period.
            let period = 2.0 * core::f64::consts::PI * cap;
            let hit = [libm::asin(sn), core::f64::consts::PI - libm::asin(sn)].iter().any(|a| {
                let d = s - base - cap * a;
                (d - libm::round(d / period) * period).abs() < 1e-12
            });
            assert!(hit, "{s} {base}");
        }
    }

    #[test]
    fn se_flow_matches_numeric_integration() {
        let p = sym1c_general();
        let sol = default_se_solution(&p).unwrap();
        let f = sample_field().with_time(0.05);
        let field = ZseField::new(sol.clone(), &p).unwrap();
        let a = z_flow_se(&sol, 0.2, &f, &p).unwrap();
        let b = flow_numeric_field(&field, 0.2, &f, 400).unwrap();
        let (dr, ds) = a.max_difference(&b).unwrap();
        assert!(dr.max(ds) < 1e-9, "{dr} {ds}");
    }

    #[test]
    fn se_vacuum_is_gauge_of_psi() {
        let p = sym1c_general();
        let d = linearization_data(&p).unwrap();
        let sol = default_se_solution(&p).unwrap();
        let cap = d.lambda_cap.unwrap();
        let eps = 0.5 * cap;
        let g = Grid::line(-4.0, 4.0, 64, Boundary::Dirichlet, 1e-3).unwrap();
        let vac = z_flow_se_vacuum(&sol, eps, &g, 0.1, &p).unwrap();
        // (2iε/Λ)Ψ = iΨ, so the result is N(iΨ).
        let shifted = crate::pde::Gauged { inner: &sol, lambda: 1.0, gamma: 0.0 };
        let direct = LogPolarField::from_fn(&g, 0.1, |x| {
            let (r, s) = shifted.log_polar(x, 0.1);
            (r, d.gamma * r + cap * (s + core::f64::consts::FRAC_PI_2))
        })
        .unwrap();
        let (dr, ds) = vac.max_difference(&direct).unwrap();
        assert!(dr.max(ds) < 1e-12);
        let far = LogPolarField::from_fn(&g, 0.1, |_| (-40.0, 0.3)).unwrap();
        let out = z_flow_se(&sol, eps, &far, &p).unwrap();
        let period = 2.0 * core::f64::consts::PI * cap;
        for k in 0..g.len() {
            let d = out.s()[k] - vac.s()[k];
            assert!((out.r()[k] - vac.r()[k]).abs() < 1e-10);
            assert!((d - libm::round(d / period) * period).abs() < 1e-9, "{d}");
        }
    }

    #[test]
    fn se_solutions_and_round_trip_converge() {
        let p = sym1c_general();
        let sol = default_se_solution(&p).unwrap();
        let a = sol.a();
        let dg = se_to_dg_solution(sol.clone(), &p).unwrap();
        let run = |points: usize| {
            let g = Grid::line(-6.0, 6.0, points, Boundary::Dirichlet, 1e-3 * 64.0 / points as f64).unwrap();
            let tr = Trajectory::sample(&g, &dg, 0.0, 5).unwrap();
            let vac = tr.map(|s| z_flow_se_vacuum(&sol, 0.3, s.grid(), s.t(), &p)).unwrap();
            let back = tr.map(|s| dg_to_se(s, &p)).unwrap();
            (residual(&p, &tr).unwrap().linf(), residual(&p, &vac).unwrap().linf(), se_residual(a, &back).unwrap().linf)
        };
        let (c, f) = (run(64), run(128));
        for (x, y) in [(c.0, f.0), (c.1, f.1), (c.2, f.2)] {
            assert!(x / y > 3.0 && x / y < 5.0, "{x} {y}");
        }
    }
}
