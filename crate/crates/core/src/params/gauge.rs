//! The nonlinear gauge group `Aff(1)` and its action on parameters.

use num_traits::{One, Zero};

use super::{DgParams, Rational};
use crate::error::{Error, Result};

/// Element `(Lambda, gamma)` of the nonlinear gauge group.
///
/// On wavefunctions it acts as `r' = r`, `s' = gamma r + Lambda s`, which leaves the density
/// untouched.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaugeElement {
    lambda: Rational,
    gamma: Rational,
}

impl GaugeElement {
    /// Validated constructor; `lambda` must be nonzero.
    pub fn new(lambda: Rational, gamma: Rational) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::SingularGauge);
        }
        Ok(Self { lambda, gamma })
    }

    /// The identity `(1, 0)`.
    pub fn identity() -> Self {
        Self { lambda: Rational::one(), gamma: Rational::zero() }
    }

    /// `Lambda`.
    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    /// `gamma`.
    pub fn gamma(&self) -> &Rational {
        &self.gamma
    }

    /// `(Lambda, gamma)` as floating point.
    pub fn to_f64(&self) -> (f64, f64) {
        (super::to_f64(&self.lambda), super::to_f64(&self.gamma))
    }
}

/// Composition `g1 ∘ g2 = (Λ1 Λ2, Λ1 γ2 + γ1)`.
pub fn gauge_compose(g1: &GaugeElement, g2: &GaugeElement) -> GaugeElement {
    GaugeElement { lambda: &g1.lambda * &g2.lambda, gamma: &g1.lambda * &g2.gamma + &g1.gamma }
}

/// Inverse `(1/Λ, -γ/Λ)`.
pub fn gauge_inverse(g: &GaugeElement) -> GaugeElement {
    let inv = g.lambda.recip();
    GaugeElement { gamma: -(&inv * &g.gamma), lambda: inv }
}

/// Parameters of the equation solved by `N_g(psi)` whenever `psi` solves the equation for `p`.
pub fn gauge_act_params(g: &GaugeElement, p: &DgParams) -> DgParams {
    let (l, c) = (&g.lambda, &g.gamma);
    let two = Rational::from_integer(2.into());
    let four = Rational::from_integer(4.into());
    let (nu1, nu2) = (p.nu1(), p.nu2());
    let [mu0, mu1, mu2, mu3, mu4, mu5] = &p.mu;
    let c_over_l = c / l;
    let c2 = c * c;

    let nu1p = nu1 / l;
    let nu2p = nu2 - &c_over_l * nu1 / &two;
    let mu1p = mu1 - &c_over_l * nu1;
    let mu2p = &c2 * nu1 / (&two * l) - c * nu2 - c * mu1 / &two + l * mu2;
    let mu3p = mu3 / l;
    let mu4p = mu4 - &c_over_l * mu3;
    let mu5p = &c2 * mu3 / (&four * l) - c * mu4 / &two + l * mu5;
    let mu0p = l * mu0;
    DgParams { n: p.n, nu: [nu1p, nu2p], mu: [mu0p, mu1p, mu2p, mu3p, mu4p, mu5p] }
}

/// Coordinates `(iota0..iota5)` on the space of gauge orbits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaugeInvariants {
    /// `nu1 mu0`.
    pub iota0: Rational,
    /// `nu1 mu2 - nu2 mu1`.
    pub iota1: Rational,
    /// `mu1 - 2 nu2`.
    pub iota2: Rational,
    /// `1 + mu3 / nu1`.
    pub iota3: Rational,
    /// `mu4 - mu1 mu3 / nu1`.
    pub iota4: Rational,
    /// `nu1 (mu2 + 2 mu5) - nu2 (mu1 + 2 mu4) + 2 nu2² mu3 / nu1`.
    pub iota5: Rational,
}

impl GaugeInvariants {
    /// `[iota0, ..., iota5]`.
    pub fn as_array(&self) -> [&Rational; 6] {
        [&self.iota0, &self.iota1, &self.iota2, &self.iota3, &self.iota4, &self.iota5]
    }
}

/// Evaluates the six gauge invariants.
pub fn compute_invariants(p: &DgParams) -> GaugeInvariants {
    let two = Rational::from_integer(2.into());
    let (nu1, nu2) = (p.nu1(), p.nu2());
    let [mu0, mu1, mu2, mu3, mu4, mu5] = &p.mu;
    GaugeInvariants {
        iota0: nu1 * mu0,
        iota1: nu1 * mu2 - nu2 * mu1,
        iota2: mu1 - &two * nu2,
        iota3: Rational::one() + mu3 / nu1,
        iota4: mu4 - mu1 * mu3 / nu1,
        iota5: nu1 * (mu2 + &two * mu5) - nu2 * (mu1 + &two * mu4) + &two * nu2 * nu2 * mu3 / nu1,
    }
}

/// Gauge `(nu1, mu1)`, which brings any point to `nu1' = 1`, `mu1' = 0`.
pub fn canonical_gauge(p: &DgParams) -> (GaugeElement, DgParams) {
    let g = GaugeElement { lambda: p.nu1().clone(), gamma: p.mu1().clone() };
    let image = gauge_act_params(&g, p);
    (g, image)
}
