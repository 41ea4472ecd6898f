//! Parameter space of the family, the nonlinear gauge group acting on it, gauge invariants
//! and the maximal-symmetry classifier.
//!
//! All arithmetic here is exact: gauge invariance is an identity over the rationals and is
//! tested as such.

mod classify;
mod gauge;

use alloc::format;
use alloc::string::ToString;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use classify::{
    classify, classify_invariants, classify_via_invariants, containment_order, predicate_report, ContainmentOrder,
    PredicateReport, Subfamily, SymmetryClass,
};
pub use gauge::{
    canonical_gauge, compute_invariants, gauge_act_params, gauge_compose, gauge_inverse, GaugeElement, GaugeInvariants,
};

/// Exact rational number used for all model parameters.
pub type Rational = BigRational;

/// Builds the rational `num / den`.
///
/// # Panics
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds the integer `v` as a rational.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Lossy conversion used at the symbolic/numeric boundary.
pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"p/q"` or an integer.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    let value: Rational = trimmed.parse().map_err(|_| Error::InvalidParams(format!("not a rational: `{trimmed}`")))?;
    Ok(value)
}

/// The eight real parameters `(nu1, nu2, mu0..mu5)` of the family together with the spatial
/// dimension `n`.
///
/// In log-polar variables `psi = exp(r + i s)` the equation reads
///
/// ```text
/// r_t = 2 nu2 Δr + nu1 Δs + 4 nu2 |∇r|² + 2 nu1 ∇r·∇s
/// s_t = -(2 mu2 Δr + mu1 Δs + 4 (mu2 + mu5) |∇r|² + 2 (mu1 + mu4) ∇r·∇s + mu3 |∇s|²)
/// ```
///
/// with the potential term `mu0 V` absent from the dynamics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DgParams {
    n: usize,
    nu: [Rational; 2],
    mu: [Rational; 6],
}

impl DgParams {
    /// Validated constructor. `mu` is ordered `mu0..mu5`.
    pub fn new(n: usize, nu: [Rational; 2], mu: [Rational; 6]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("spatial dimension must be at least 1".to_string()));
        }
        if nu[0].is_zero() {
            return Err(Error::InvalidParams("nu1 must be nonzero".to_string()));
        }
        Ok(Self { n, nu, mu })
    }

    /// Starts a builder with `nu1` set and every other coefficient zero.
    pub fn builder(n: usize, nu1: Rational) -> DgParamsBuilder {
        DgParamsBuilder { n, nu: [nu1, Rational::zero()], mu: Default::default() }
    }

    /// Spatial dimension.
    pub fn n(&self) -> usize {
        self.n
    }
    /// Coefficient `nu1` (never zero).
    pub fn nu1(&self) -> &Rational {
        &self.nu[0]
    }
    /// Coefficient `nu2`.
    pub fn nu2(&self) -> &Rational {
        &self.nu[1]
    }
    /// Coefficient `mu_k` for `k = 0..=5`.
    ///
    /// # Panics
    /// Panics if `k > 5`.
    pub fn mu(&self, k: usize) -> &Rational {
        &self.mu[k]
    }
    /// Coefficient `mu0`.
    pub fn mu0(&self) -> &Rational {
        &self.mu[0]
    }
    /// Coefficient `mu1`.
    pub fn mu1(&self) -> &Rational {
        &self.mu[1]
    }
    /// Coefficient `mu2`.
    pub fn mu2(&self) -> &Rational {
        &self.mu[2]
    }
    /// Coefficient `mu3`.
    pub fn mu3(&self) -> &Rational {
        &self.mu[3]
    }
    /// Coefficient `mu4`.
    pub fn mu4(&self) -> &Rational {
        &self.mu[4]
    }
    /// Coefficient `mu5`.
    pub fn mu5(&self) -> &Rational {
        &self.mu[5]
    }

    /// Same coefficients in another spatial dimension.
    pub fn with_dimension(&self, n: usize) -> Result<Self> {
        Self::new(n, self.nu.clone(), self.mu.clone())
    }

    /// Floating-point copy for the numerical modules.
    pub fn coeffs(&self) -> DgCoeffs {
        DgCoeffs {
            n: self.n,
            nu1: to_f64(&self.nu[0]),
            nu2: to_f64(&self.nu[1]),
            mu: [
                to_f64(&self.mu[0]),
                to_f64(&self.mu[1]),
                to_f64(&self.mu[2]),
                to_f64(&self.mu[3]),
                to_f64(&self.mu[4]),
                to_f64(&self.mu[5]),
            ],
        }
    }
}

impl core::fmt::Display for DgParams {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "n={} nu1={} nu2={} mu0={} mu1={} mu2={} mu3={} mu4={} mu5={}",
            self.n, self.nu[0], self.nu[1], self.mu[0], self.mu[1], self.mu[2], self.mu[3], self.mu[4], self.mu[5]
        )
    }
}

/// Incremental construction of [`DgParams`]; unset coefficients are zero.
#[derive(Clone, Debug)]
pub struct DgParamsBuilder {
    n: usize,
    nu: [Rational; 2],
    mu: [Rational; 6],
}

impl DgParamsBuilder {
    /// Sets `nu2`.
    pub fn nu2(mut self, v: Rational) -> Self {
        self.nu[1] = v;
        self
    }
    /// Sets `mu_k`.
    ///
    /// # Panics
    /// Panics if `k > 5`.
    pub fn mu(mut self, k: usize, v: Rational) -> Self {
        self.mu[k] = v;
        self
    }
    /// Validates and returns the parameter point.
    pub fn build(self) -> Result<DgParams> {
        DgParams::new(self.n, self.nu, self.mu)
    }
}

/// Floating-point view of [`DgParams`] used by the finite-difference code.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DgCoeffs {
    /// Spatial dimension.
    pub n: usize,
    /// `nu1`.
    pub nu1: f64,
    /// `nu2`.
    pub nu2: f64,
    /// `mu0..mu5`.
    pub mu: [f64; 6],
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_nu1_and_zero_dimension() {
        assert!(DgParams::builder(1, int(0)).build().is_err());
        assert!(DgParams::builder(0, int(1)).build().is_err());
    }

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }
}
