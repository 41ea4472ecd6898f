//! First-order differential operators `Σ ξ_j ∂_{x_j} + τ ∂_t + φ ∂_r + σ ∂_s`.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use super::{SymExpr, Var};
use crate::error::{Error, Result};
use crate::params::Rational;

/// Vector field on `(x1..xn, t, r, s)` with [`SymExpr`] coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorFieldSpec {
    xi: Vec<SymExpr>,
    tau: SymExpr,
    phi: SymExpr,
    sigma: SymExpr,
}

impl VectorFieldSpec {
    /// Builds a field; `n = xi.len()` must be at least 1 and no coefficient may mention
    /// `x_j` with `j > n`.
    pub fn new(xi: Vec<SymExpr>, tau: SymExpr, phi: SymExpr, sigma: SymExpr) -> Result<Self> {
        let n = xi.len();
        if n == 0 {
            return Err(Error::InvalidArgument("vector field needs n >= 1".into()));
        }
        let used = xi.iter().chain([&tau, &phi, &sigma]).map(SymExpr::max_spatial_index).max().unwrap_or(0);
        if used > n {
            return Err(Error::ArityMismatch { left: n, right: used });
        }
        Ok(Self { xi, tau, phi, sigma })
    }

    /// The zero field in dimension `n`.
    pub fn zero(n: usize) -> Self {
        Self {
            xi: alloc::vec![SymExpr::zero(); n.max(1)],
            tau: SymExpr::zero(),
            phi: SymExpr::zero(),
            sigma: SymExpr::zero(),
        }
    }

    /// Spatial dimension.
    pub fn n(&self) -> usize {
        self.xi.len()
    }
    /// Coefficient of `∂_{x_j}`, `j` is 1-based.
    ///
    /// # Panics
    /// Panics if `j` is outside `1..=n`.
    pub fn xi(&self, j: usize) -> &SymExpr {
        &self.xi[j - 1]
    }
    /// All spatial coefficients.
    pub fn xis(&self) -> &[SymExpr] {
        &self.xi
    }
    /// Coefficient of `∂_t`.
    pub fn tau(&self) -> &SymExpr {
        &self.tau
    }
    /// Coefficient of `∂_r`.
    pub fn phi(&self) -> &SymExpr {
        &self.phi
    }
    /// Coefficient of `∂_s`.
    pub fn sigma(&self) -> &SymExpr {
        &self.sigma
    }

    /// Coefficient attached to variable `v`.
    pub fn coefficient(&self, v: Var) -> &SymExpr {
        match v {
            Var::X(j) => &self.xi[j - 1],
            Var::T => &self.tau,
            Var::R => &self.phi,
            Var::S => &self.sigma,
        }
    }

    /// Variables `x1..xn, t, r, s` in order.
    pub fn variables(&self) -> impl Iterator<Item = Var> {
        (1..=self.n()).map(Var::X).chain([Var::T, Var::R, Var::S])
    }

    /// Applies the operator to a scalar expression.
    pub fn apply(&self, e: &SymExpr) -> SymExpr {
        self.variables()
            .map(|v| {
                let c = self.coefficient(v);
                if c.is_zero() {
                    SymExpr::zero()
                } else {
                    c * e.differentiate(v)
                }
            })
            .sum()
    }

    /// True iff every coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.xi.iter().all(SymExpr::is_zero) && self.tau.is_zero() && self.phi.is_zero() && self.sigma.is_zero()
    }

    /// Coefficient-wise map.
    fn map(&self, f: impl Fn(&SymExpr) -> SymExpr) -> Self {
        Self { xi: self.xi.iter().map(&f).collect(), tau: f(&self.tau), phi: f(&self.phi), sigma: f(&self.sigma) }
    }

    fn zip(&self, other: &Self, f: impl Fn(&SymExpr, &SymExpr) -> SymExpr) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::ArityMismatch { left: self.n(), right: other.n() });
        }
        Ok(Self {
            xi: self.xi.iter().zip(&other.xi).map(|(a, b)| f(a, b)).collect(),
            tau: f(&self.tau, &other.tau),
            phi: f(&self.phi, &other.phi),
            sigma: f(&self.sigma, &other.sigma),
        })
    }

    /// `c · self`.
    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|e| e.scale(c))
    }

    /// `self + other`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    /// `self - other`.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    /// Floating-point coefficients `(ξ, τ, φ, σ)` at a point; `xi_out` receives `ξ`.
    pub fn eval_into(&self, x: &[f64], t: f64, r: f64, s: f64, xi_out: &mut [f64]) -> (f64, f64, f64) {
        for (o, e) in xi_out.iter_mut().zip(&self.xi) {
            *o = e.eval(x, t, r, s);
        }
        (self.tau.eval(x, t, r, s), self.phi.eval(x, t, r, s), self.sigma.eval(x, t, r, s))
    }
}

/// Commutator `[X, Y]` with components `X(Y^i) - Y(X^i)`.
pub fn lie_bracket(x: &VectorFieldSpec, y: &VectorFieldSpec) -> Result<VectorFieldSpec> {
    if x.n() != y.n() {
        return Err(Error::ArityMismatch { left: x.n(), right: y.n() });
    }
    x.zip(y, |a, b| x.apply(b) - y.apply(a))
}

impl fmt::Display for VectorFieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<alloc::string::String> = self
            .variables()
            .filter(|v| !self.coefficient(*v).is_zero())
            .map(|v| format!("({}) d/d{v}", self.coefficient(v)))
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::int;
    use crate::symexpr::parse_expr;

    fn field(n: usize, xi: &[&str], tau: &str, phi: &str, sigma: &str) -> VectorFieldSpec {
        let p = |s: &str| parse_expr(s, n).unwrap();
        VectorFieldSpec::new(xi.iter().map(|s| p(s)).collect(), p(tau), p(phi), p(sigma)).unwrap()
    }

    #[test]
    fn dilation_and_time_translation() {
        let h = field(1, &["0"], "1", "0", "0");
        let d = field(1, &["x1"], "2*t", "-1/2", "0");
        assert!(lie_bracket(&h, &h).unwrap().is_zero());
        assert_eq!(lie_bracket(&d, &h).unwrap(), h.scale(&int(-2)));
    }

    #[test]
    fn arity_is_checked() {
        let a = VectorFieldSpec::zero(1);
        let b = VectorFieldSpec::zero(2);
        assert!(matches!(lie_bracket(&a, &b), Err(Error::ArityMismatch { .. })));
        let bad = VectorFieldSpec::new(
            alloc::vec![SymExpr::var(Var::X(2))],
            SymExpr::zero(),
            SymExpr::zero(),
            SymExpr::zero(),
        );
        assert!(bad.is_err());
    }

    #[test]
    fn apply_is_a_derivation() {
        let x = field(2, &["x2", "-x1"], "0", "0", "0");
        let e = parse_expr("x1^2 + x2^2", 2).unwrap();
        assert!(x.apply(&e).is_zero());
        assert_eq!(format!("{x}"), "(x2) d/dx1 + (-x1) d/dx2");
    }
}
