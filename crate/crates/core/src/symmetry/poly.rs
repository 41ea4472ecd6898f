//! Univariate rational polynomials `f(z)` parametrising the infinite family `Y_f`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::params::{to_f64, Rational};
use crate::symexpr::{parse_expr_with, SymExpr, Var};

/// `Σ c_k z^k`, stored lowest degree first without trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    /// From coefficients, lowest degree first.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    /// The zero polynomial.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant `c`.
    pub fn constant(c: Rational) -> Self {
        Self::new(alloc::vec![c])
    }

    /// `c z^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = alloc::vec![Rational::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    /// Coefficients, lowest degree first.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Whether this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `f'`.
    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer((k as i64).into()))
                .collect(),
        )
    }

    /// `z f`.
    pub fn times_z(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = alloc::vec![Rational::zero()];
        v.extend(self.coeffs.iter().cloned());
        Self::new(v)
    }

    /// `c f`.
    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `f + g`.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        Self::new((0..n).map(|k| self.coeffs.get(k).unwrap_or(&zero) + other.coeffs.get(k).unwrap_or(&zero)).collect())
    }

    /// `f − g`.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    /// `f g`.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = alloc::vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::new(v)
    }

    /// `[f, g] = f g' − g f'`.
    pub fn bracket(&self, other: &Self) -> Self {
        self.mul(&other.derivative()).sub(&other.mul(&self.derivative()))
    }

    /// Horner evaluation in floating point.
    pub fn eval(&self, z: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * z + to_f64(c))
    }

    /// Floating coefficients for repeated evaluation.
    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }

    /// `f(e)` as an exact expression.
    pub fn compose(&self, e: &SymExpr) -> SymExpr {
        self.coeffs.iter().rev().fold(SymExpr::zero(), |acc, c| &(&acc * e) + &SymExpr::constant(c.clone()))
    }

    /// Parses a polynomial in the variable `z`, e.g. `"z^3 - 1/2*z + 2"`.
    pub fn parse(src: &str) -> Result<Self> {
        let resolve = |name: &str| (name == "z").then_some(Var::T);
        let e = parse_expr_with(src, &resolve)?;
        let mut coeffs: Vec<Rational> = Vec::new();
        for term in e.terms() {
            if !term.a.is_zero() || !term.b.is_zero() {
                return Err(Error::Parse { pos: 0, msg: "polynomial in z expected, found exp(...)".into() });
            }
            let k = term.mono.degree(Var::T) as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Rational::zero());
            }
            coeffs[k] += term.coeff;
        }
        Ok(Self::new(coeffs))
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let mut body = String::new();
            if k == 0 || !mag.is_one() {
                body.push_str(&alloc::format!("{mag}"));
            }
            if k > 0 {
                if !body.is_empty() {
                    body.push('*');
                }
                body.push('z');
                if k > 1 {
                    body.push_str(&alloc::format!("^{k}"));
                }
            }
            f.write_str(&body)?;
        }
        Ok(())
    }
}
