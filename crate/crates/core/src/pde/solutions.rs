//! Closed-form reference solutions.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::params::{compute_invariants, to_f64, DgParams, Rational, Subfamily};

/// A solution of the log-polar system, evaluated pointwise.
pub trait Solution {
    /// `(r, s)` at `(x, t)` with a phase that is continuous in `(x, t)`.
    fn log_polar(&self, x: &[f64], t: f64) -> (f64, f64);
}

impl<S: Solution + ?Sized> Solution for &S {
    fn log_polar(&self, x: &[f64], t: f64) -> (f64, f64) {
        (**self).log_polar(x, t)
    }
}

impl<S: Solution + ?Sized> Solution for alloc::boxed::Box<S> {
    fn log_polar(&self, x: &[f64], t: f64) -> (f64, f64) {
        (**self).log_polar(x, t)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Time orientation of a heat equation with diffusion `D > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HeatDirection {
    /// `∂_t Φ + D ΔΦ = 0`.
    Forward,
    /// `∂_t Φ − D ΔΦ = 0`.
    Backward,
}

impl HeatDirection {
    /// Sign `σ` in `∂_t Φ = σ D ΔΦ`.
    pub fn sigma(self) -> f64 {
        match self {
            HeatDirection::Forward => -1.0,
            HeatDirection::Backward => 1.0,
        }
    }

    /// The other direction.
    pub fn reversed(self) -> Self {
        match self {
            HeatDirection::Forward => HeatDirection::Backward,
            HeatDirection::Backward => HeatDirection::Forward,
        }
    }
}

/// `Φ = offset + amplitude · (w²/w(t)²)^{n/2} · exp(−|x − center|² / w(t)²)`,
/// `w(t)² = w² + 4σDt`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeatMoments {
    /// Positive constant keeping `Φ` away from zero.
    pub offset: f64,
    /// Non-negative Gaussian amplitude (0 gives a constant solution).
    pub amplitude: f64,
    /// Gaussian centre; its length is the spatial dimension.
    pub center: Vec<f64>,
    /// Width `w > 0` at `t = 0`.
    pub width: f64,
}

impl HeatMoments {
    /// Constant solution `Φ ≡ c`.
    pub fn constant(c: f64, dim: usize) -> Self {
        Self { offset: c, amplitude: 0.0, center: vec![0.0; dim], width: 1.0 }
    }
}

/// Strictly positive solution of a heat equation.
#[derive(Clone, Debug, PartialEq)]
pub struct HeatSolution {
    diffusion: f64,
    direction: HeatDirection,
    moments: HeatMoments,
}

/// Builds a positive Gaussian-plus-constant solution of `∂_tΦ ∓ DΔΦ = 0`.
pub fn heat_solution(diffusion: f64, direction: HeatDirection, moments: HeatMoments) -> Result<HeatSolution> {
    if !(diffusion > 0.0 && diffusion.is_finite()) {
        return Err(Error::NonPositive(format!("diffusion coefficient {diffusion}")));
    }
    if !(moments.offset > 0.0) || moments.amplitude < 0.0 || !(moments.width > 0.0) {
        return Err(Error::NonPositive(format!(
            "heat data needs offset > 0, amplitude >= 0, width > 0 (got {}, {}, {})",
            moments.offset, moments.amplitude, moments.width
        )));
    }
    if moments.center.is_empty() {
        return Err(Error::InvalidArgument("heat solution needs a centre".into()));
    }
    Ok(HeatSolution { diffusion, direction, moments })
}

impl HeatSolution {
    /// Diffusion coefficient `D`.
    pub fn diffusion(&self) -> f64 {
        self.diffusion
    }
    /// Direction.
    pub fn direction(&self) -> HeatDirection {
        self.direction
    }
    /// Gaussian data.
    pub fn moments(&self) -> &HeatMoments {
        &self.moments
    }

    /// Squared width at time `t`; the Gaussian part exists while this is positive.
    pub fn width_sq(&self, t: f64) -> f64 {
        let w = self.moments.width;
        w * w + 4.0 * self.direction.sigma() * self.diffusion * t
    }

    /// Value `Φ(x, t)`; NaN once a shrinking Gaussian has collapsed.
    pub fn value(&self, x: &[f64], t: f64) -> f64 {
        let m = &self.moments;
        if m.amplitude == 0.0 {
            return m.offset;
        }
        let ws = self.width_sq(t);
        if !(ws > 0.0) {
            return f64::NAN;
        }
        let n = m.center.len() as f64;
        let d2: f64 = x.iter().zip(&m.center).map(|(a, c)| (a - c) * (a - c)).sum();
        let w = m.width;
        m.offset + m.amplitude * libm::pow(w * w / ws, 0.5 * n) * libm::exp(-d2 / ws)
    }

    /// Value with an error instead of NaN or a non-positive result.
    pub fn checked_value(&self, x: &[f64], t: f64) -> Result<f64> {
        let v = self.value(x, t);
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonPositive(format!("heat solution {v} at t = {t}")))
        }
    }
}

/// Gaussian packet `A · z^{−n/2} exp(−|x − c + 2akt|²/(w² z)) e^{i(k·(x−c) + a|k|²t)}`,
/// `z = 1 − 4iat/w²`.
#[derive(Clone, Debug, PartialEq)]
pub struct SePacket {
    /// Complex amplitude `A`.
    pub amplitude: Complex64,
    /// Centre `c` at `t = 0`.
    pub center: Vec<f64>,
    /// Width `w > 0`.
    pub width: f64,
    /// Wave vector `k`.
    pub wavevector: Vec<f64>,
}

/// Data of a free Schroedinger solution: a plane wave `b e^{i(k_b·x + a|k_b|²t)}` plus an
/// optional Gaussian packet.
#[derive(Clone, Debug, PartialEq)]
pub struct SeMoments {
    /// Plane-wave amplitude `b`.
    pub background: Complex64,
    /// Plane-wave vector `k_b`; its length is the spatial dimension.
    pub background_wavevector: Vec<f64>,
    /// Optional packet; `|A| < |b|` keeps the sum nowhere zero.
    pub packet: Option<SePacket>,
}

/// Nowhere-vanishing solution of `iΨ_t = aΔΨ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeSolution {
    a: f64,
    moments: SeMoments,
}

/// Builds a nowhere-zero solution of `iΨ_t = aΔΨ`.
pub fn se_gaussian(a: f64, moments: SeMoments) -> Result<SeSolution> {
    if a == 0.0 || !a.is_finite() {
        return Err(Error::InvalidArgument(format!("dispersion coefficient must be nonzero, got {a}")));
    }
    let n = moments.background_wavevector.len();
    if n == 0 {
        return Err(Error::InvalidArgument("background wave vector fixes the dimension; it is empty".into()));
    }
    let b = moments.background.norm();
    match &moments.packet {
        None if b == 0.0 => return Err(Error::InvalidArgument("zero wavefunction".into())),
        None => {}
        Some(pk) => {
            if pk.center.len() != n || pk.wavevector.len() != n {
                return Err(Error::InvalidArgument("packet dimension mismatch".into()));
            }
            if !(pk.width > 0.0) {
                return Err(Error::InvalidArgument("packet width must be positive".into()));
            }
            let amp = pk.amplitude.norm();
            if b == 0.0 && amp == 0.0 {
                return Err(Error::InvalidArgument("zero wavefunction".into()));
            }
            if b != 0.0 && amp >= b {
                return Err(Error::InvalidArgument(
                    "packet amplitude must be below the background to stay nowhere zero".into(),
                ));
            }
        }
    }
    Ok(SeSolution { a, moments })
}

impl SeSolution {
    /// Dispersion coefficient `a`.
    pub fn a(&self) -> f64 {
        self.a
    }
    /// Defining data.
    pub fn moments(&self) -> &SeMoments {
        &self.moments
    }
    /// Spatial dimension.
    pub fn dim(&self) -> usize {
        self.moments.background_wavevector.len()
    }

    /// Plane wave `amp · e^{i(k·x + a|k|²t)}`.
    pub fn plane_wave(a: f64, amp: Complex64, k: Vec<f64>) -> Result<Self> {
        se_gaussian(a, SeMoments { background: amp, background_wavevector: k, packet: None })
    }

    fn ln_packet(&self, pk: &SePacket, x: &[f64], t: f64) -> Complex64 {
        let a = self.a;
        let n = pk.center.len() as f64;
        let w2 = pk.width * pk.width;
        let z = Complex64::new(1.0, -4.0 * a * t / w2);
        let mut y2 = 0.0;
        let mut phase = 0.0;
        let k2 = dot(&pk.wavevector, &pk.wavevector);
        for ((xi, ci), ki) in x.iter().zip(&pk.center).zip(&pk.wavevector) {
            let y = xi - ci + 2.0 * a * ki * t;
            y2 += y * y;
            phase += ki * (xi - ci);
        }
        phase += a * k2 * t;
        -0.5 * n * z.ln() - Complex64::new(y2 / w2, 0.0) / z + Complex64::new(0.0, phase)
    }

    fn background_phase(&self, x: &[f64], t: f64) -> f64 {
        let k = &self.moments.background_wavevector;
        dot(k, x) + self.a * dot(k, k) * t
    }

    /// Complex value `Ψ(x, t)`.
    pub fn value(&self, x: &[f64], t: f64) -> Complex64 {
        let (r, s) = self.log_polar(x, t);
        Complex64::from_polar(libm::exp(r), s)
    }
}

impl Solution for SeSolution {
    fn log_polar(&self, x: &[f64], t: f64) -> (f64, f64) {
        let b = self.moments.background;
        match &self.moments.packet {
            Some(pk) if b.is_zero() => {
                let l = pk.amplitude.ln() + self.ln_packet(pk, x, t);
                (l.re, l.im)
            }
            Some(pk) => {
                let theta = self.background_phase(x, t);
                let q = pk.amplitude / b * (self.ln_packet(pk, x, t) - Complex64::new(0.0, theta)).exp();
                let l = (Complex64::new(1.0, 0.0) + q).ln();
                (libm::log(b.norm()) + l.re, b.arg() + theta + l.im)
            }
            None => (libm::log(b.norm()), b.arg() + self.background_phase(x, t)),
        }
    }
}

/// `ln cosh u` without overflow.
pub fn ln_cosh(u: f64) -> f64 {
    let a = u.abs();
    a + libm::log1p(libm::exp(-2.0 * a)) - core::f64::consts::LN_2
}

/// Travelling-free stationary profile `r = (A/B) ln cosh(k·x) + r0`,
/// `s = −ωt − (2ν₂/ν₁) r`, `ω = A²|k|²/B`, valid whenever `B = 2(ι₁+ι₅)/ν₁ ≠ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogCoshProfile {
    ratio: f64,
    omega: f64,
    gamma: f64,
    k: Vec<f64>,
    r0: f64,
}

impl LogCoshProfile {
    /// Profile with wave vector `k` and amplitude offset `r0` for the parameters `p`.
    pub fn new(p: &DgParams, k: Vec<f64>, r0: f64) -> Result<Self> {
        let iota = compute_invariants(p);
        let two = Rational::from_integer(2.into());
        let a = &two * &iota.iota1 / p.nu1();
        let b = &two * (&iota.iota1 + &iota.iota5) / p.nu1();
        if b.is_zero() {
            return Err(Error::InvalidArgument("ln cosh profile needs iota1 + iota5 != 0".into()));
        }
        if k.len() != p.n() {
            return Err(Error::InvalidArgument("wave vector length must equal n".into()));
        }
        let ratio = to_f64(&(&a / &b));
        let omega = to_f64(&(&a * &a / &b)) * dot(&k, &k);
        let gamma = to_f64(&(&two * p.nu2() / p.nu1()));
        Ok(Self { ratio, omega, gamma, k, r0 })
    }
}

impl Solution for LogCoshProfile {
    fn log_polar(&self, x: &[f64], t: f64) -> (f64, f64) {
        let r = self.r0 + self.ratio * ln_cosh(dot(&self.k, x));
        (r, -self.omega * t - self.gamma * r)
    }
}

/// Self-similar solution for the `Sym3` subfamily:
/// `r = −(n/2) ln τ + h·exp(−|x|²/(w²τ²))`, `s = −|x|²/(4ν₁τ) − (2ν₂/ν₁) r`, `τ = t + T`.
#[derive(Clone, Debug, PartialEq)]
pub struct SelfSimilar {
    n: f64,
    nu1: f64,
    gamma: f64,
    t_shift: f64,
    height: f64,
    width: f64,
}

impl SelfSimilar {
    /// Requires `p` in the Galilei and scaling subfamilies; valid for `t > −t_shift`.
    pub fn new(p: &DgParams, t_shift: f64, height: f64, width: f64) -> Result<Self> {
        if !(Subfamily::GalSub.holds(p) && Subfamily::FinSub.holds(p)) {
            return Err(Error::InvalidArgument("self-similar profile needs a Sym3 point".into()));
        }
        if !(width > 0.0) {
            return Err(Error::InvalidArgument("width must be positive".into()));
        }
        Ok(Self {
            n: p.n() as f64,
            nu1: to_f64(p.nu1()),
            gamma: 2.0 * to_f64(p.nu2()) / to_f64(p.nu1()),
            t_shift,
            height,
            width,
        })
    }
}

impl Solution for SelfSimilar {
    fn log_polar(&self, x: &[f64], t: f64) -> (f64, f64) {
        let tau = t + self.t_shift;
        let x2 = dot(x, x);
        let y2 = x2 / (tau * tau);
        let r = -0.5 * self.n * libm::log(tau) + self.height * libm::exp(-y2 / (self.width * self.width));
        (r, -x2 / (4.0 * self.nu1 * tau) - self.gamma * r)
    }
}

/// Pointwise nonlinear gauge `r' = r`, `s' = γ r + Λ s` applied to another solution.
#[derive(Clone, Debug, PartialEq)]
pub struct Gauged<S> {
    /// Underlying solution.
    pub inner: S,
    /// `Λ`.
    pub lambda: f64,
    /// `γ`.
    pub gamma: f64,
}

impl<S: Solution> Solution for Gauged<S> {
    fn log_polar(&self, x: &[f64], t: f64) -> (f64, f64) {
        let (r, s) = self.inner.log_polar(x, t);
        (r, self.gamma * r + self.lambda * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_heat_solution() {
        let h = heat_solution(1.0, HeatDirection::Forward, HeatMoments::constant(1.0, 1)).unwrap();
        assert_eq!(h.value(&[0.3], 5.0), 1.0);
        assert!(heat_solution(0.0, HeatDirection::Forward, HeatMoments::constant(1.0, 1)).is_err());
        assert!(heat_solution(1.0, HeatDirection::Forward, HeatMoments::constant(0.0, 1)).is_err());
    }

    #[test]
    fn heat_kernel_satisfies_its_equation_pointwise() {
        for dir in [HeatDirection::Forward, HeatDirection::Backward] {
            let m = HeatMoments { offset: 0.5, amplitude: 1.0, center: vec![0.2, -0.1], width: 1.5 };
            let h = heat_solution(0.7, dir, m).unwrap();
            let (x, t, e) = ([0.3, 0.4], 0.2, 1e-4);
            let dt = (h.value(&x, t + e) - h.value(&x, t - e)) / (2.0 * e);
            let lap: f64 = (0..2)
                .map(|a| {
                    let mut p = x;
                    let mut m = x;
                    p[a] += e;
                    m[a] -= e;
                    (h.value(&p, t) - 2.0 * h.value(&x, t) + h.value(&m, t)) / (e * e)
                })
                .sum();
            assert!((dt - dir.sigma() * 0.7 * lap).abs() < 1e-5, "{dir:?}");
        }
    }

    #[test]
    fn se_packet_solves_schroedinger_and_never_vanishes() {
        let sol = se_gaussian(
            -0.8,
            SeMoments {
                background: Complex64::new(1.0, 0.5),
                background_wavevector: vec![0.3],
                packet: Some(SePacket {
                    amplitude: Complex64::new(0.0, 0.9),
                    center: vec![0.4],
                    width: 1.1,
                    wavevector: vec![-0.7],
                }),
            },
        )
        .unwrap();
        let (x, t, e) = (0.25, 0.3, 1e-4);
        let v = |x: f64, t: f64| sol.value(&[x], t);
        let dt = (v(x, t + e) - v(x, t - e)) / (2.0 * e);
        let lap = (v(x + e, t) - 2.0 * v(x, t) + v(x - e, t)) / (e * e);
        let res = Complex64::new(0.0, 1.0) * dt - lap * sol.a();
        assert!(res.norm() < 1e-5, "{res}");
        for i in 0..200 {
            assert!(v(-10.0 + 0.1 * i as f64, 0.7).norm() > 0.0);
        }
    }

    #[test]
    fn se_rejects_possible_zeros() {
        let m = SeMoments {
            background: Complex64::new(1.0, 0.0),
            background_wavevector: vec![0.0],
            packet: Some(SePacket {
                amplitude: Complex64::new(1.0, 0.0),
                center: vec![0.0],
                width: 1.0,
                wavevector: vec![0.0],
            }),
        };
        assert!(se_gaussian(1.0, m.clone()).is_err());
        assert!(se_gaussian(0.0, SeMoments { packet: None, ..m }).is_err());
    }

    #[test]
    fn plane_wave_phase() {
        let pw = SeSolution::plane_wave(2.0, Complex64::new(1.0, 0.0), vec![1.5]).unwrap();
        let (r, s) = pw.log_polar(&[0.4], 0.1);
        assert!(r.abs() < 1e-15);
        assert!((s - (1.5 * 0.4 + 2.0 * 2.25 * 0.1)).abs() < 1e-14);
    }

    #[test]
    fn ln_cosh_is_stable() {
        assert!((ln_cosh(0.3) - libm::log(libm::cosh(0.3))).abs() < 1e-15);
        assert!((ln_cosh(800.0) - (800.0 - core::f64::consts::LN_2)).abs() < 1e-9);
    }
}
